import { MockQuestion } from './mockApi.js';

// Question ids deliberately match the Python package's bundled dataset
// (tests/fixtures/stats_dataset.jsonl) so a ratings export from a scripted
// session can be fed straight into its analytics commands.
export const QUESTIONS: MockQuestion[] = [
  {
    qId: 'sd01',
    question: 'Which river flows through the city of Paris?',
    answer: 'Seine',
    hints: [
      'It rises on the Langres plateau in Burgundy.',
      'It empties into the English Channel near Le Havre.',
      'Barges still carry freight along its urban quays.',
    ],
  },
  {
    qId: 'sd02',
    question: 'Who wrote the tragedy Hamlet?',
    answer: 'William Shakespeare',
    hints: [
      'He was born in Stratford-upon-Avon.',
      'His acting company built the Globe Theatre.',
      'He is often called the Bard of Avon.',
    ],
  },
];
