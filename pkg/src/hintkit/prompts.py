"""Default prompt templates. All are overridable per run via PipelineConfig."""

# Step 1 of generation: the question itself is the prompt.
ANSWER_PROMPT = "{question}"

# Step 3: ask for hints that avoid the answer.
HINT_PROMPT = (
    'Generate {n} hints for the question "{question}" in a numbered list, '
    "without including the answer in the hints."
)

# Convergence candidate generation.
CANDIDATE_PROMPT = (
    'Generate up to {n} candidate answers words for the question '
    '"{question}" in bullet points.'
)

# Convergence per-candidate judgement.
JUDGE_PROMPT = 'Does the hint "{hint}" refer to "{candidate}"? Choose ONLY between "Yes" or "No".'

# Question-type classification (LLM-backed classifier).
TYPE_PROMPT = (
    "Classify the question into one coarse class out of "
    "{major_labels} and one fine class out of {minor_labels}. "
    'Question: "{question}". Answer with MAJOR:minor only.'
)

# Entity extraction (LLM-backed extractor).
ENTITY_PROMPT = (
    'List the named entities that appear verbatim in the text "{text}" '
    "in bullet points, one entity per line. Write NONE if there are none."
)
