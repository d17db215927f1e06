#!/usr/bin/env python3
"""Regenerate the bundled test fixtures.

Run from anywhere: ``python3 tests/fixtures/build_fixtures.py``. Every output
is deterministic, so committed fixtures never churn on rebuild.

Produced files (all in this directory):

- gazetteer.json / calibration.jsonl — offline resolver table and the
  normalizer calibration corpus shared by the end-to-end fixtures.
- e2e_source.jsonl / e2e_replay.jsonl / e2e_expected.json — a 26-question
  source file, the recorded service responses to replay a full offline
  pipeline run over it, and the planted stage-accounting truth.
- sweep_dataset.jsonl / sweep_ratings.jsonl / sweep_replay.jsonl /
  sweep_expected.json — a candidate-count sweep corpus whose hint verdicts
  are planted so the human-correlation curve peaks at n=11. The curve is
  verified here with independent arithmetic before anything is written.
- filter_corpus.jsonl / filter_replay.jsonl / filter_meta.json — 200 labeled
  hints (140 clean, 40 lexical leaks, 20 rephrases with similarity >= 0.72,
  one of them exactly at the threshold) for the filtering guarantee.
- stats_dataset.jsonl / stats_golden.json — a 20-record dataset plus its
  aggregate report computed with independent arithmetic (not the library's).

The builder uses the library only for plumbing that must match at the byte
level (request digests, the response-store format, prompt templates, the
gazetteer matcher) and for sanity cross-checks; every golden *value* is
derived independently and the build fails loudly on any disagreement.
"""

from __future__ import annotations

import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent
sys.path.insert(0, str(FIXTURES.parent.parent / "src"))

from hintkit.clients.base import (  # noqa: E402
    ResponseStore,
    chat_digest,
    embed_digest,
    pageview_digest,
)
from hintkit.convergence import inject_ground_truth  # noqa: E402
from hintkit.familiarity import GazetteerEntityExtractor  # noqa: E402
from hintkit.hints import answers_match, leaks_answer  # noqa: E402
from hintkit.prompts import CANDIDATE_PROMPT, HINT_PROMPT, JUDGE_PROMPT  # noqa: E402
from hintkit.questions import KeywordTypeClassifier  # noqa: E402

REPLAY = "replay"
PAGEVIEW_START = "20150101"
PAGEVIEW_END = "20231231"

HINTS_PER_QUESTION = 10
CANDIDATE_COUNT = 5  # the end-to-end config scores with 5 candidates

# Embedding vectors are 4-dimensional integer vectors so every cosine against
# the question vector (1,0,0,0) is an exact rational: cos = x / |v|.
QUESTION_VECTOR = [1.0, 0.0, 0.0, 0.0]
CLEAN_VECTORS = [  # cosines 0.60, 8/17, 5/13, 0.28, 20/29, 28/53, 9/41, 33/65
    [3.0, 4.0, 0.0, 0.0],
    [8.0, 15.0, 0.0, 0.0],
    [5.0, 12.0, 0.0, 0.0],
    [7.0, 24.0, 0.0, 0.0],
    [20.0, 21.0, 0.0, 0.0],
    [28.0, 45.0, 0.0, 0.0],
    [9.0, 40.0, 0.0, 0.0],
    [33.0, 56.0, 0.0, 0.0],
]
SIMILAR_VECTOR = [4.0, 3.0, 0.0, 0.0]  # cosine 0.80
VERY_SIMILAR_VECTOR = [24.0, 7.0, 0.0, 0.0]  # cosine 0.96
# |(18,16,6,3)| = sqrt(625) = 25 exactly, so the cosine is exactly 18/25 = 0.72.
BOUNDARY_VECTOR = [18.0, 16.0, 6.0, 3.0]

SIMILARITY_CUTOFF = 0.72


def cosine_to_unit_x(vector) -> float:
    dot = vector[0]
    norm = math.sqrt(sum(x * x for x in vector))
    return dot / norm


# ---------------------------------------------------------------------------
# shared gazetteer: surface form -> canonical article title


GAZETTEER = {
    # answers of the source corpus
    "Pablo Picasso": "Pablo Picasso",
    "Michelangelo": "Michelangelo",
    "Bosporus": "Bosporus",
    "Tidal locking": "Tidal locking",
    "Earth": "Earth",
    "Ceres": "Ceres (dwarf planet)",
    "Athens": "Athens",
    "Seine": "Seine",
    "William Shakespeare": "William Shakespeare",
    "Mars": "Mars",
    "Tokyo": "Tokyo",
    "Ludwig van Beethoven": "Ludwig van Beethoven",
    "Gold": "Gold",
    "1989": "1989",
    "Pamplona": "Pamplona",
    "Atlantic Ocean": "Atlantic Ocean",
    "Marie Curie": "Marie Curie",
    "France": "France",
    "Trumpet": "Trumpet",
    "Six": "6 (number)",
    "Mount Everest": "Mount Everest",
    "Apple Inc.": "Apple Inc.",
    "Mandarin Chinese": "Mandarin Chinese",
    "Bald Eagle": "Bald Eagle",
    "Adriatic Sea": "Adriatic Sea",
    # entities referenced by questions and hints
    "Paris": "Paris",
    "Burgundy": "Burgundy",
    "English Channel": "English Channel",
    "Le Havre": "Le Havre",
    "Louvre": "Louvre",
    "Pont Neuf": "Pont Neuf",
    "Normandy": "Normandy",
    "Romeo and Juliet": "Romeo and Juliet",
    "Stratford-upon-Avon": "Stratford-upon-Avon",
    "Anne Hathaway": "Anne Hathaway (wife of Shakespeare)",
    "Globe Theatre": "Globe Theatre",
    "London": "London",
    "Ben Jonson": "Ben Jonson",
    "First Folio": "First Folio",
    "Olympus Mons": "Olympus Mons",
    "Phobos": "Phobos (moon)",
    "Deimos": "Deimos (moon)",
    "Sun": "Sun",
    "Japan": "Japan",
    "Edo": "Edo",
    "Mount Fuji": "Mount Fuji",
    "Honshu": "Honshu",
    "Shibuya": "Shibuya",
    "Bonn": "Bonn",
    "Vienna": "Vienna",
    "Haydn": "Joseph Haydn",
    "Fidelio": "Fidelio",
    "Napoleon": "Napoleon",
    "Fort Knox": "Fort Knox",
    "South Africa": "South Africa",
    "California": "California",
    "Berlin": "Berlin",
    "Berlin Wall": "Berlin Wall",
    "Checkpoint Charlie": "Checkpoint Charlie",
    "East Germany": "East Germany",
    "Cold War": "Cold War",
    "Europe": "Europe",
    "Tiananmen Square": "Tiananmen Square",
    "Brandenburg Gate": "Brandenburg Gate",
    "Germany": "Germany",
    "Ernest Hemingway": "Ernest Hemingway",
    "Navarre": "Navarre",
    "Pyrenees": "Pyrenees",
    "Spain": "Spain",
    "Camino de Santiago": "Camino de Santiago",
    "Brazil": "Brazil",
    "Africa": "Africa",
    "Columbus": "Christopher Columbus",
    "Titanic": "Titanic",
    "Charles Lindbergh": "Charles Lindbergh",
    "Gulf Stream": "Gulf Stream",
    "Bermuda": "Bermuda",
    "Warsaw": "Warsaw",
    "Nobel Prize": "Nobel Prize",
    "Henri Becquerel": "Henri Becquerel",
    "Poland": "Poland",
    "Sorbonne": "Sorbonne",
    "Pierre Curie": "Pierre Curie",
    "Pierre": "Pierre Curie",
    "Statue of Liberty": "Statue of Liberty",
    "United States": "United States",
    "Gustave Eiffel": "Gustave Eiffel",
    "Joseph Pulitzer": "Joseph Pulitzer",
    "Lafayette": "Gilbert du Motier, Marquis de Lafayette",
    "American Revolution": "American Revolution",
    "Miles Davis": "Miles Davis",
    "Louis Armstrong": "Louis Armstrong",
    "Jazz": "Jazz",
    "Jericho": "Jericho",
    "Dizzy Gillespie": "Dizzy Gillespie",
    "Tenzing Norgay": "Tenzing Norgay",
    "Edmund Hillary": "Edmund Hillary",
    "Nepal": "Nepal",
    "Tibet": "Tibet",
    "George Mallory": "George Mallory",
    "iPhone": "IPhone",
    "Macintosh": "Macintosh",
    "Isaac Newton": "Isaac Newton",
    "Steve Jobs": "Steve Jobs",
    "Cupertino": "Cupertino, California",
    "iPod": "IPod",
    "Beijing": "Beijing",
    "China": "China",
    "Taiwan": "Taiwan",
    "Singapore": "Singapore",
    "United Nations": "United Nations",
    "Benjamin Franklin": "Benjamin Franklin",
    "Great Seal": "Great Seal of the United States",
    "Alaska": "Alaska",
    "Italy": "Italy",
    "Balkan Peninsula": "Balkan Peninsula",
    "Venice": "Venice",
    "Split": "Split, Croatia",
    # used by the standalone statistics dataset
    "Petra": "Petra",
    "Jordan": "Jordan",
    "Sistine Chapel": "Sistine Chapel",
    "Rome": "Rome",
}

# Mean monthly views planted for resolved article titles. Anything a fixture
# resolves but is not listed here falls back to a deterministic formula.
CURATED_VIEWS = {
    "Paris": 2_400_000,
    "Earth": 5_100_000,
    "United States": 8_200_000,
    "Seine": 61_000,
    "Burgundy": 33_000,
    "English Channel": 96_000,
    "Le Havre": 18_500,
    "Louvre": 410_000,
    "Pont Neuf": 12_400,
    "Normandy": 150_000,
    "William Shakespeare": 1_900_000,
    "Romeo and Juliet": 620_000,
    "London": 2_100_000,
    "Mars": 1_750_000,
    "Sun": 1_400_000,
    "Tokyo": 980_000,
    "Japan": 1_850_000,
    "Mount Fuji": 210_000,
    "Ludwig van Beethoven": 830_000,
    "Vienna": 520_000,
    "Napoleon": 1_350_000,
    "Gold": 640_000,
    "Fort Knox": 88_000,
    "South Africa": 700_000,
    "California": 1_250_000,
    "1989": 74_000,
    "Berlin Wall": 390_000,
    "Berlin": 760_000,
    "Cold War": 900_000,
    "Europe": 1_150_000,
    "Germany": 1_600_000,
    "Pamplona": 52_000,
    "Spain": 1_050_000,
    "Atlantic Ocean": 480_000,
    "Titanic": 1_500_000,
    "Marie Curie": 710_000,
    "Warsaw": 260_000,
    "Nobel Prize": 560_000,
    "Poland": 640_000,
    "France": 2_000_000,
    "Statue of Liberty": 540_000,
    "Trumpet": 130_000,
    "Miles Davis": 330_000,
    "Jazz": 290_000,
    "6 (number)": 41_000,
    "Mount Everest": 690_000,
    "Nepal": 430_000,
    "Apple Inc.": 1_700_000,
    "Steve Jobs": 980_000,
    "IPhone": 1_200_000,
    "Mandarin Chinese": 240_000,
    "China": 1_450_000,
    "Beijing": 470_000,
    "Bald Eagle": 310_000,
    "Alaska": 380_000,
    "Adriatic Sea": 140_000,
    "Venice": 610_000,
    "Italy": 1_300_000,
}

# This article exists in the gazetteer but its pageview record is missing, so
# the mention is dropped during scoring (exercises the missing-article path).
MISSING_ARTICLE = "Olympus Mons"


def fallback_views(title: str) -> int:
    return 15_000 + 137 * (sum(ord(c) for c in title) % 997)


def month_payload(mean_views: int) -> dict:
    # Three months whose arithmetic mean is exactly the planted value.
    return {
        "months": [
            {"month": "2019-03", "views": mean_views - 10},
            {"month": "2019-04", "views": mean_views},
            {"month": "2019-05", "views": mean_views + 10},
        ]
    }


# ---------------------------------------------------------------------------
# the 26-question source corpus
#
# Hint tuples are (clean text, kind, marker list); kind is "keep", "leak"
# (shares a lemma with the answer), or "similar" (embedding at or above the
# 0.72 cutoff). Markers reference the hint reply's own source lines.


E2E_QUESTIONS = [
    {
        "id": "q01",
        "question": "Who painted Guernica?",
        "answer": "Pablo Picasso",
        "expect": "TooShort",
    },
    {
        "id": "q02",
        "question": (
            "Which famous Italian Renaissance artist spent four long years "
            "lying on his back painting the magnificent ceiling of the "
            "Sistine Chapel in Rome?"
        ),
        "answer": "Michelangelo",
        "expect": "TooLong",
    },
    {
        "id": "q03",
        "question": "Name the strait that separates Europe from Asia at Istanbul.",
        "answer": "Bosporus",
        "expect": "NoQuestionMark",
    },
    {
        "id": "q04",
        "question": "Which spice is harvested from the stigmas of a purple crocus flower?",
        "answer": "Zazofran Extract",
        "expect": "AnswerNoWikiPage",
    },
    {
        "id": "q05",
        "question": "Why does the Moon always show the same face to Earth?",
        "answer": "Tidal locking",
        "expect": "DescriptionType",
    },
    {
        "id": "q06",
        "question": "What is the meaning of the Latin word terra?",
        "answer": "Earth",
        "expect": "DescriptionType",
    },
    {
        "id": "q07",
        "question": "Which asteroid did the Dawn spacecraft orbit after leaving Vesta?",
        "answer": "Ceres",
        "expect": "AnswerNotFound",
        "answer_reply": "I don't know the answer to that question.",
    },
    {
        "id": "q08",
        "question": "Which city hosted the first modern Olympic Games in 1896?",
        "answer": "Athens",
        "expect": "AnswerMismatch",
        "answer_reply": "Paris hosted the first modern games in 1896.",
    },
    {
        "id": "q09",
        "question": "Which river flows through the city of Paris?",
        "answer": "Seine",
        "expect": "ok",
        "answer_reply": (
            "The Seine [1] is the river that flows through the heart of Paris.\n"
            "\n"
            "Sources:\n"
            "[1] https://ref.example/rivers/seine\n"
        ),
        "hint_sources": {
            1: "https://ref.example/regions/burgundy",
            2: "https://ref.example/coast/channel",
        },
        "hints": [
            ("It rises on the Langres plateau in Burgundy.", "keep", [1]),
            ("It empties into the English Channel near Le Havre.", "keep", [2]),
            ("A seine is also the name of a fishing net.", "leak", []),
            ("A river runs through the French capital city.", "similar", []),
            ("Barges still carry freight along its urban quays.", "keep", []),
            ("The Louvre stands on its right bank.", "keep", []),
            ("Thirty-seven bridges cross it in the city, including the Pont Neuf.", "keep", []),
            ("Impressionist painters loved its misty riverbanks.", "keep", []),
            ("Its lower course winds through Normandy in wide loops.", "keep", [1]),
            ("Anglers along its banks once supplied the royal kitchens.", "keep", []),
        ],
        "candidates": ["Loire", "Seine", "Rhone", "Garonne", "Danube", "Rhine"],
    },
    {
        "id": "q10",
        "question": "Who wrote the tragedy Romeo and Juliet?",
        "answer": "William Shakespeare",
        "expect": "ok",
        "answer_reply": (
            "Romeo and Juliet was written by William Shakespeare [1], the "
            "Elizabethan playwright.\n"
            "\n"
            "Sources:\n"
            "[1] https://ref.example/authors/shakespeare\n"
        ),
        "hint_sources": {},
        "hints": [
            ("He was born in Stratford-upon-Avon in 1564.", "keep", []),
            ("He married Anne Hathaway when he was eighteen.", "keep", []),
            ("His acting company performed at the Globe Theatre in London.", "keep", []),
            ("The Shakespeare family glove business paid for his schooling.", "leak", []),
            ("He left his wife the second-best bed in his will.", "keep", []),
            ("Ben Jonson called him the soul of the age.", "keep", []),
            ("The First Folio collected his plays seven years after his death.", "keep", []),
            ("His sonnets number one hundred fifty-four.", "keep", []),
            ("Scholars still debate the identity of the dark lady in his poems.", "keep", []),
            ("A trust maintains his childhood home for visitors.", "keep", []),
        ],
        "candidates": [
            "Christopher Marlowe",
            "William Shakespeare",
            "Ben Jonson",
            "John Webster",
            "Thomas Kyd",
            "Francis Bacon",
        ],
    },
    {
        "id": "q11",
        "question": "Which planet is known as the Red Planet?",
        "answer": "Mars",
        "expect": "ok",
        "answer_reply": "The Red Planet is Mars, the fourth planet from the Sun.",
        "hint_sources": {},
        "hints": [
            ("Olympus Mons rises higher there than any peak on Earth.", "keep", []),
            ("Two small moons, Phobos and Deimos, circle it.", "keep", []),
            ("Iron oxide dust gives its surface a rusty color.", "keep", []),
            ("Its polar caps grow and shrink with the seasons.", "keep", []),
            ("A day there lasts about forty minutes longer than ours.", "keep", []),
            ("Ancient riverbeds suggest water once flowed across it.", "keep", []),
            ("It is the fourth world outward from the Sun.", "keep", []),
            ("Rovers named Spirit and Opportunity explored its plains.", "keep", []),
            ("The Viking landers photographed its rocky deserts in 1976.", "keep", []),
            ("Its thin air is mostly carbon dioxide.", "keep", []),
        ],
        "candidates": ["Venus", "Jupiter", "Mercury", "Saturn", "Neptune", "Mars"],
    },
    {
        "id": "q12",
        "question": "Which city is the capital of Japan?",
        "answer": "Tokyo",
        "expect": "ok",
        "answer_reply": "The capital of Japan is Tokyo, on the island of Honshu.",
        "hint_sources": {},
        "hints": [
            ("More than thirteen million people live within its borders.", "keep", []),
            ("It was called Edo before the emperor moved there.", "keep", []),
            ("Mount Fuji is visible from its tallest towers on clear days.", "keep", []),
            ("Its fish market once auctioned the world's priciest tuna.", "keep", []),
            ("The 1964 Summer Games were hosted there.", "keep", []),
            ("Cherry blossoms draw crowds to its parks each spring.", "keep", []),
            ("It sits on Honshu, the largest island of its country.", "keep", []),
            ("Its rail network moves millions of commuters daily.", "keep", []),
            ("Japan's capital city is the one being asked about.", "similar", []),
            ("Neon signs light up the Shibuya crossing every night.", "keep", []),
        ],
        "candidates": ["Kyoto", "Osaka", "Tokyo", "Nagoya", "Sapporo", "Yokohama"],
    },
    {
        "id": "q13",
        "question": "Who composed the Ninth Symphony with its Ode to Joy finale?",
         "answer": "Ludwig van Beethoven",
        "expect": "ok",
        "answer_reply": (
            "The Ninth Symphony, with the Ode to Joy finale, was composed by "
            "Ludwig van Beethoven [1].\n"
            "\n"
            "Sources:\n"
            "[1] https://ref.example/composers/ninth\n"
        ),
        "hint_sources": {
            1: "https://ref.example/cities/bonn",
        },
        "hints": [
            ("He was born in Bonn in 1770.", "keep", [1]),
            ("He studied briefly with Haydn in Vienna.", "keep", []),
            ("He kept composing after losing his hearing completely.", "keep", []),
            ("The Beethoven house museum displays his ear horns.", "leak", []),
            ("His only opera tells the story of Fidelio.", "keep", []),
            ("Ludwig was the name he shared with his grandfather.", "leak", []),
            ("The Moonlight Sonata is among his best-known piano works.", "keep", []),
            ("He dedicated, then angrily undedicated, a symphony to Napoleon.", "keep", []),
            ("Friends communicated with him through conversation books.", "keep", []),
            ("Twenty thousand mourners followed his funeral in Vienna.", "keep", []),
        ],
        "candidates": [
            "Wolfgang Amadeus Mozart",
            "Ludwig van Beethoven",
            "Johannes Brahms",
            "Joseph Haydn",
            "Franz Schubert",
            "Richard Wagner",
        ],
    },
    {
        "id": "q14",
        "question": "Which metal has the chemical symbol Au?",
        "answer": "Gold",
        "expect": "ok",
        "answer_reply": "The chemical symbol Au belongs to gold.",
        "hint_sources": {},
        "hints": [
            ("Alchemists spent centuries trying to make it from lead.", "keep", []),
            ("Its chemical symbol comes from the Latin word aurum.", "keep", []),
            ("Fort Knox guards the largest American stockpile of it.", "keep", []),
            ("South Africa's deep mines produced most of it for decades.", "keep", []),
            ("The gold rush of 1849 drew thousands to California.", "leak", []),
            ("Olympic champions bite their medals for the cameras.", "keep", []),
            ("It never tarnishes, however long it stays buried.", "keep", []),
            ("A single gram can be beaten into a square meter of leaf.", "keep", []),
            ("Its price is quoted per troy ounce.", "keep", []),
            ("Wedding bands are traditionally made from its alloys.", "keep", []),
        ],
        "candidates": ["Silver", "Gold", "Copper", "Platinum", "Iron", "Mercury"],
    },
    {
        "id": "q15",
        "question": "When did the Berlin Wall fall to crowds of peaceful protesters?",
        "answer": "1989",
        "expect": "ok",
        "answer_reply": "The Berlin Wall fell in 1989, on the night of November 9.",
        "hint_sources": {},
        "hints": [
            ("Crowds danced on the concrete barrier that November night.", "keep", []),
            ("Checkpoint Charlie lost its purpose that autumn.", "keep", []),
            ("East Germany's travel decree was misread at a press conference.", "keep", []),
            ("The Cold War began visibly crumbling in central Europe.", "keep", []),
            ("Hammers and chisels became souvenirs overnight in Berlin.", "keep", []),
            ("That same year, students filled Tiananmen Square.", "keep", []),
            ("A pop singer later performed atop the rubble in a piano scarf.", "keep", []),
            ("Families divided for twenty-eight years embraced at the crossings.", "keep", []),
            ("The Brandenburg Gate reopened to pedestrians soon after.", "keep", []),
            ("Germany reunified less than a year later.", "keep", []),
        ],
        "candidates": ["1987", "1991", "1961", "1990", "1985", "1989"],
    },
    {
        "id": "q16",
        "question": "Where does the annual Running of the Bulls festival take place?",
        "answer": "Pamplona",
        "expect": "ok",
        "answer_reply": "The Running of the Bulls takes place in Pamplona, Spain.",
        "hint_sources": {},
        "hints": [
            ("Ernest Hemingway made its fiesta famous in a novel.", "keep", []),
            ("It is the capital of the old kingdom of Navarre.", "keep", []),
            ("The narrow lanes of Pamplona are barricaded each July morning.", "leak", []),
            ("White clothes and red scarves are the traditional outfit.", "keep", []),
            ("The festival honors Saint Fermin every July.", "keep", []),
            ("Runners sprint ahead of the herd for under three minutes.", "keep", []),
            ("The Spanish town with the famous bull run is the answer.", "similar", []),
            ("It lies in the foothills of the Pyrenees in northern Spain.", "keep", []),
            ("Its citadel walls date from the sixteenth century.", "keep", []),
            ("Pilgrims on the Camino de Santiago pass through it.", "keep", []),
        ],
        "candidates": ["Seville", "Madrid", "Pamplona", "Valencia", "Bilbao", "Granada"],
    },
    {
        "id": "q17",
        "question": "Which ocean separates Brazil from the western coast of Africa?",
        "answer": "Atlantic Ocean",
        "expect": "ok",
        "answer_reply": (
            "The Atlantic Ocean lies between Brazil and the west coast of Africa."
        ),
        "hint_sources": {},
        "hints": [
            ("Columbus crossed it in thirty-three days.", "keep", []),
            ("The Titanic sank in its icy northern waters.", "keep", []),
            ("An underwater mountain chain runs down its middle.", "keep", []),
            ("Its name recalls a titan who held up the sky.", "keep", []),
            ("Charles Lindbergh flew across it alone in 1927.", "keep", []),
            ("The Gulf Stream carries warm water up its western side.", "keep", []),
            ("It is the second largest body of salt water on the planet.", "keep", []),
            ("It is the water lying between South America and Africa.", "similar", []),
            ("Bermuda sits far out in its western reaches.", "keep", []),
            ("Undersea telegraph cables first linked its shores in 1858.", "keep", []),
        ],
        "candidates": [
            "Pacific Ocean",
            "Indian Ocean",
            "Atlantic Ocean",
            "Arctic Ocean",
            "Southern Ocean",
            "Caribbean Sea",
        ],
    },
    {
        "id": "q18",
        "question": "Who discovered radium together with her husband Pierre?",
        "answer": "Marie Curie",
        "expect": "ok",
        "answer_reply": "Radium was discovered by Marie Curie and her husband Pierre in 1898.",
        "hint_sources": {},
        "hints": [
            ("She was born Maria Sklodowska in Warsaw.", "keep", []),
            ("She remains the only person with a Nobel Prize in two sciences.", "keep", []),
            ("Her notebooks are still too radioactive to handle.", "keep", []),
            ("She shared her first prize with her husband and Henri Becquerel.", "keep", []),
            ("The curie unit of radioactivity honors her family name.", "leak", []),
            ("She drove mobile X-ray units to the front in 1914.", "keep", []),
            ("Polonium, her first discovery, honors her homeland Poland.", "keep", []),
            ("She became the Sorbonne's first female professor.", "keep", []),
            ("Her daughter Irene also won a scientific prize.", "keep", []),
            ("Pierre and she refused to patent their isolation process.", "keep", []),
        ],
        "candidates": [
            "Lise Meitner",
            "Marie Curie",
            "Rosalind Franklin",
            "Dorothy Hodgkin",
            "Ada Lovelace",
            "Emmy Noether",
        ],
    },
    {
        "id": "q19",
        "question": "Which country gifted the Statue of Liberty to the United States?",
        "answer": "France",
        "expect": "ok",
        "answer_reply": (
            "The Statue of Liberty was a gift from France to the United States, "
            "dedicated in 1886."
        ),
        "hint_sources": {},
        "hints": [
            ("Its gift marked the centennial of American independence.", "keep", []),
            ("Gustave Eiffel engineered the statue's iron skeleton.", "keep", []),
            ("Sculptor Bartholdi modeled the copper skin in Paris workshops.", "keep", []),
            ("A smaller replica faces west from an island on the Seine.", "keep", []),
            ("A republic across the sea funded the statue by public lottery.", "keep", []),
            ("Its tricolor flag shares the statue's revolutionary ideals.", "keep", []),
            ("Crates carrying 350 copper pieces crossed on the frigate Isere.", "keep", []),
            ("Joseph Pulitzer raised pedestal funds on the receiving side.", "keep", []),
            ("The donor nation celebrates its national day on July 14.", "keep", []),
            ("Lafayette's homeland had aided the American Revolution earlier.", "keep", []),
        ],
        "candidates": ["Spain", "France", "Italy", "Belgium", "Netherlands", "Portugal"],
    },
    {
        "id": "q20",
        "question": "Which instrument did jazz legend Miles Davis famously play?",
        "answer": "Trumpet",
        "expect": "ok",
        "answer_reply": "Miles Davis famously played the trumpet.",
        "hint_sources": {},
        "hints": [
            ("Louis Armstrong made it the voice of early jazz.", "keep", []),
            ("Its three valves arrived in the nineteenth century.", "keep", []),
            ("A muted trumpet opens the album Kind of Blue.", "leak", []),
            ("Players buzz their lips into a cup-shaped mouthpiece.", "keep", []),
            ("Herald fanfares once announced kings with it.", "keep", []),
            ("Its bell points straight ahead, unlike the French horn's.", "keep", []),
            ("Miles Davis's chosen instrument is what the question seeks.", "similar", []),
            ("Jericho's walls fell to its blast in the Bible story.", "keep", []),
            ("Dizzy Gillespie played one with a bent bell.", "keep", []),
            ("Its highest register is nicknamed the scream.", "keep", []),
        ],
        "candidates": ["Saxophone", "Trumpet", "Piano", "Double bass", "Clarinet", "Drums"],
    },
    {
        "id": "q21",
        "question": "How many players does a standard volleyball team field per side?",
        "answer": "Six",
        "expect": "ok",
        "answer_reply": "A standard volleyball team fields six players per side.",
        "hint_sources": {},
        "hints": [
            ("Half a dozen athletes stand on each half of the net.", "keep", []),
            ("Three attack at the net while three defend the back court.", "keep", []),
            ("Rotation moves every player through all the positions.", "keep", []),
            ("Six jerseys per side take the floor in official play.", "leak", []),
            ("A libero may replace one back-row defender.", "keep", []),
            ("The same headcount fields an ice hockey lineup too.", "keep", []),
            ("Beach volleyball trims the number to a third of it.", "keep", []),
            ("Exactly six starters appear on the score sheet.", "leak", []),
            ("Setters, hitters, and blockers share the court duties.", "keep", []),
            ("How many volleyball players per team is being asked.", "similar", []),
        ],
        "candidates": ["Five", "Six", "Seven", "Eleven", "Nine", "Four"],
    },
    {
        "id": "q22",
        "question": "Which mountain is the tallest peak above sea level on Earth?",
        "answer": "Mount Everest",
        "expect": "ok",
        "answer_reply": (
            "The tallest peak above sea level is Mount Everest [1], at 8,849 meters.\n"
            "\n"
            "Sources:\n"
            "[1] https://ref.example/peaks/everest\n"
        ),
        "hint_sources": {
            1: "https://ref.example/people/norgay-hillary",
            2: "https://ref.example/ranges/himalaya",
        },
        "hints": [
            ("Tenzing Norgay and Edmund Hillary first reached its summit in 1953.", "keep", [1]),
            ("Nepalis call it Sagarmatha, goddess of the sky.", "keep", []),
            ("Its summit ridge marks the border between Nepal and Tibet.", "keep", [2]),
            ("Climbers queue for hours in its death zone.", "keep", []),
            ("George Mallory vanished on its slopes in 1924.", "keep", []),
            ("Sir George Everest lent the peak his surname.", "leak", []),
            ("Its height grows a few millimeters every year.", "keep", []),
            ("Sherpa guides fix the ropes to its summit each spring.", "keep", []),
            ("It towers above the Khumbu glacier.", "keep", []),
            ("Jet-stream winds scour its pyramid for most of the year.", "keep", []),
        ],
        "candidates": [
            "K2",
            "Mount Everest",
            "Kangchenjunga",
            "Lhotse",
            "Makalu",
            "Annapurna",
        ],
    },
    {
        "id": "q23",
        "question": "Which company created the iPhone and the Macintosh computer?",
        "answer": "Apple Inc.",
        "expect": "ok",
        "answer_reply": "The iPhone and the Macintosh were created by Apple Inc. of Cupertino.",
        "hint_sources": {},
        "hints": [
            ("Two Steves founded it in a California garage.", "keep", []),
            ("Its first logo showed Isaac Newton beneath a tree.", "keep", []),
            ("A rainbow fruit silhouette branded its early machines.", "keep", []),
            ("Steve Jobs returned in 1997 to rescue it.", "keep", []),
            ("Its headquarters is a ring-shaped campus in Cupertino.", "keep", []),
            ("The iPod revived its fortunes before the phone era.", "keep", []),
            ("Think different was its famous slogan.", "keep", []),
            ("The maker of the iPhone and Macintosh is wanted here.", "similar", []),
            ("It briefly became the first three-trillion-dollar company.", "keep", []),
            ("Its laptops carry the MacBook name.", "keep", []),
        ],
        "candidates": ["Microsoft", "Apple Inc.", "IBM", "Sony", "Google", "Samsung"],
    },
    {
        "id": "q24",
        "question": "Which language has the most native speakers in the world?",
        "answer": "Mandarin Chinese",
        "expect": "ok",
        "answer_reply": (
            "The language with the most native speakers is Mandarin Chinese."
        ),
        "hint_sources": {},
        "hints": [
            ("Nearly a billion people grow up speaking it.", "keep", []),
            ("Four tones can turn one syllable into four words.", "keep", []),
            ("It is the official speech of Beijing.", "keep", []),
            ("Its writing uses thousands of characters, not an alphabet.", "keep", []),
            ("Pinyin spells its sounds with Roman letters.", "keep", []),
            ("China made it the national standard in 1956.", "keep", []),
            ("Taiwan and Singapore also school children in it.", "keep", []),
            ("Its own name for itself is Putonghua.", "keep", []),
            ("Simplified characters replaced many traditional forms on the mainland.", "keep", []),
            ("United Nations interpreters rank it among the six working tongues.", "keep", []),
        ],
        "candidates": [
            "Hindi",
            "English",
            "Mandarin Chinese",
            "Spanish",
            "Arabic",
            "Bengali",
        ],
    },
    {
        "id": "q25",
        "question": "Which bird is the national symbol of the United States?",
        "answer": "Bald Eagle",
        "expect": "ok",
        "answer_reply": "The national bird of the United States is the bald eagle.",
        "hint_sources": {},
        "hints": [
            ("Benjamin Franklin preferred the turkey for the honor.", "keep", []),
            ("Its white head crowns a dark brown body.", "keep", []),
            ("It snatches fish from rivers with yellow talons.", "keep", []),
            ("DDT nearly wiped it out before the 1972 ban.", "keep", []),
            ("Bald refers to its white head, not missing feathers.", "leak", []),
            ("It appears on the Great Seal clutching arrows and an olive branch.", "keep", []),
            ("Nesting pairs build the largest tree nests of any bird.", "keep", []),
            ("Its scream in films is usually a red-tailed hawk's cry.", "keep", []),
            ("Name the national bird of the USA.", "similar", []),
            ("Alaska hosts the densest population of them.", "keep", []),
        ],
        "candidates": [
            "Wild Turkey",
            "Bald Eagle",
            "Golden Eagle",
            "Condor",
            "Osprey",
            "Peregrine Falcon",
        ],
    },
    {
        "id": "q26",
        "question": "Which sea lies between Italy and the Balkan Peninsula?",
        "answer": "Adriatic Sea",
        "expect": "prune",
        "answer_reply": "The Adriatic Sea lies between Italy and the Balkan Peninsula.",
        "hint_sources": {},
        "hints": [
            ("Venice sits in a lagoon at its northern end.", "keep", []),
            ("The Adriatic coast of Croatia draws summer crowds.", "leak", []),
            ("Calm seas make its ferry crossings gentle.", "leak", []),
            ("Ferries link Ancona with Split across its width.", "keep", []),
            ("Which body of water separates Italy from the Balkans?", "similar", []),
            ("Sailors call it the sea of seven winds.", "leak", []),
            ("Its shallow waters warm quickly each summer.", "keep", []),
            ("It is the water between the Italian boot and the Balkan shore.", "similar", []),
            ("Name the gulf dividing Italy from the Balkan Peninsula.", "similar", []),
            ("The bora wind whips down from its karst cliffs.", "keep", []),
        ],
        "candidates": [
            "Tyrrhenian Sea",
            "Adriatic Sea",
            "Ionian Sea",
            "Aegean Sea",
            "Ligurian Sea",
            "Black Sea",
        ],
    },
]


# ---------------------------------------------------------------------------
# sweep fixture content

SWEEP_QUESTION = "Which river discharges the greatest volume of water on Earth?"
SWEEP_ANSWER = "Amazon"
SWEEP_CANDIDATES = [
    "Amazon",
    "Nile",
    "Yangtze",
    "Mississippi",
    "Danube",
    "Volga",
    "Ganges",
    "Mekong",
    "Rhine",
    "Thames",
    "Loire",
    "Elbe",
    "Oder",
    "Tagus",
    "Ebro",
    "Tiber",
    "Douro",
    "Vistula",
    "Dnieper",
    "Zambezi",
]

# (hint text, answer verdict, extra-valid candidate positions, 1..5 rating).
# Positions index SWEEP_CANDIDATES; all sets live inside {1..10} so that the
# scores are exactly affine in the scaled ratings at n = 11 and the planted
# correlation curve peaks there.
SWEEP_HINTS = [
    ("It drains the largest rainforest on the planet.", True, (), 5),
    ("Its mouth discharges more water than the next seven rivers combined.", True, (9, 10), 4),
    ("It begins as snowmelt high in the Peruvian Andes.", True, (7, 8, 9, 10), 3),
    ("A Greek myth about warrior women inspired its name.", True, (5, 6, 7, 8, 9, 10), 2),
    ("It is a very long river in the wettest part of the world.", True, (3, 4, 5, 6, 7, 8, 9, 10), 1),
    ("Its waters are home to pink dolphins.", False, (), 1),
    ("Its basin spans nearly half of South America.", True, (), 5),
]

SWEEP_N_RANGE = range(1, 21)
SWEEP_BEST_N = 11


# ---------------------------------------------------------------------------
# filter-fixture content

FILTER_QUESTION = "Which river flows through the city of Paris?"
FILTER_ANSWER = "Seine"

_CLEAN_SUBJECTS = [
    "The river",
    "This waterway",
    "The watercourse",
    "That broad stream",
    "The city's river",
    "Its gentle current",
    "The famous waterway",
    "This storied river",
    "The capital's river",
    "The old waterway",
    "The slow green river",
    "That urban river",
]
_CLEAN_PREDICATES = [
    "passes beneath the Pont Neuf",
    "once froze solid during a harsh winter",
    "carries barges loaded with grain",
    "reflects the lights of the Eiffel Tower",
    "divides the left bank from the right",
    "hosted floating swimming pools in summer",
    "inspired generations of painters",
    "winds past the Louvre's long facade",
    "flows north toward the sea",
    "supplied water to medieval mills",
    "floods its stone quays in rainy years",
    "shelters houseboats along its banks",
]

_LEAK_STEMS = [
    "Everyone calls this river the {}.",
    "Boats crowd the {} each August.",
    "The {} splits the city in two.",
    "Paris grew along the {}.",
    "The {} flows gently to the north.",
    "Poets praised the {} for centuries.",
    "Bridges span the {} at every turn.",
    "The {} carried kings and cargo alike.",
    "Winter mists rise off the {}.",
    "Lovers stroll beside the {} at dusk.",
]
_LEAK_FORMS = ["Seine", "seine", "SEINE", "Seine river"]

_REPHRASES = [
    "Which river runs through the middle of Paris?",
    "Tell me the river that crosses Paris.",
    "What is the name of the river in Paris?",
    "Name the waterway that flows through Paris.",
    "Which waterway passes through the heart of Paris?",
    "Identify the river flowing through the French capital.",
    "The question asks which river goes through Paris.",
    "Which famous river traverses Paris?",
    "What river winds through the city of Paris?",
    "Paris is crossed by which river?",
    "Which stream runs through Paris, France?",
    "Say which river moves through central Paris.",
    "The river through Paris is the subject here.",
    "Which river cuts the city of Paris in two?",
    "Give the name of the Parisian river.",
    "Which body of water flows through Paris?",
    "A river crosses Paris; which one is it?",
    "Which river passes through the capital of France?",
    "What is the river called that flows through Paris?",
    "Which great river flows right through Paris?",
]

_REPHRASE_VECTORS = [  # cosines 0.8, 0.96, 12/13, 15/17, 35/37, 21/29, 45/53, 40/41, 60/61
    SIMILAR_VECTOR,
    VERY_SIMILAR_VECTOR,
    [12.0, 5.0, 0.0, 0.0],
    [15.0, 8.0, 0.0, 0.0],
    [35.0, 12.0, 0.0, 0.0],
    [21.0, 20.0, 0.0, 0.0],
    [45.0, 28.0, 0.0, 0.0],
    [40.0, 9.0, 0.0, 0.0],
    [60.0, 11.0, 0.0, 0.0],
]


# ---------------------------------------------------------------------------
# extra questions for the statistics dataset (the other 18 reuse the
# end-to-end content tables)

STATS_EXTRA = [
    {
        "id": "sd19",
        "question": "Which country is home to the ancient rock city of Petra?",
        "answer": "Jordan",
        "snippet": "Petra lies in southern Jordan, carved into rose-red sandstone.",
        "hints": [
            "Its capital Amman lies an hour north of the site.",
            "The Nabataeans carved its most famous monument from sandstone.",
            "A narrow gorge called the Siq guards the entrance.",
            "Lawrence of Arabia crossed its deserts in 1917.",
            "The Dead Sea forms part of its western border.",
        ],
    },
    {
        "id": "sd20",
        "question": "Who painted the ceiling of the Sistine Chapel?",
        "answer": "Michelangelo",
        "snippet": "The Sistine Chapel ceiling was painted by Michelangelo between 1508 and 1512.",
        "hints": [
            "He also sculpted the marble David in Florence.",
            "Pope Julius II summoned him to Rome for the task.",
            "He considered himself a sculptor rather than a painter.",
            "The Last Judgment covers the altar wall he painted later.",
            "Four years on scaffolding left his neck permanently bent.",
        ],
    },
]


# ---------------------------------------------------------------------------
# helpers


def independent_word_count(text: str) -> int:
    return len(text.strip().rstrip("?").split())


def write_jsonl(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


class FixtureWriter:
    """Collects digest -> response entries, rejecting conflicts, then writes
    one replay file."""

    def __init__(self, path: Path):
        self.path = path
        self.entries: dict[str, tuple[str, dict]] = {}

    def chat(self, prompt: str, text: str, params: dict | None = None) -> None:
        self._add(chat_digest(REPLAY, prompt, params or {}), "chat", {"text": text})

    def embed(self, text: str, vector) -> None:
        self._add(embed_digest(REPLAY, text), "embed", {"vector": list(vector)})

    def pageviews(self, title: str, payload: dict) -> None:
        digest = pageview_digest(title, PAGEVIEW_START, PAGEVIEW_END)
        self._add(digest, "pageviews", payload)

    def _add(self, digest: str, kind: str, response: dict) -> None:
        entry = (kind, response)
        existing = self.entries.get(digest)
        if existing is not None and existing != entry:
            raise SystemExit(f"conflicting fixture entry for digest {digest}")
        self.entries[digest] = entry

    def write(self) -> int:
        if self.path.exists():
            self.path.unlink()
        store = ResponseStore(self.path)
        for digest, (kind, response) in self.entries.items():
            store.put(digest, kind, response)
        return len(self.entries)


_DECLINE_SUBSTRINGS = (
    "i don't know",
    "i do not know",
    "i'm not sure",
    "cannot find",
    "can't find",
    "unable to",
    "no information",
)


def classify(question: str):
    label = KeywordTypeClassifier().classify(question)
    return label.major.value, label.minor


def check_e2e_tables() -> None:
    """Fail fast on any authoring slip before fixtures are written."""
    resolver_table = GAZETTEER
    texts_seen: set[str] = set()
    for q in E2E_QUESTIONS:
        qid, question, answer = q["id"], q["question"], q["answer"]
        wc = independent_word_count(question)
        expect = q["expect"]
        if expect == "TooShort":
            assert wc < 6, f"{qid}: expected < 6 words, got {wc}"
            continue
        if expect == "TooLong":
            assert wc > 20, f"{qid}: expected > 20 words, got {wc}"
            continue
        assert 6 <= wc <= 20, f"{qid}: word count {wc} outside 6..20"
        if expect == "NoQuestionMark":
            assert not question.rstrip().endswith("?"), qid
            continue
        assert question.rstrip().endswith("?"), f"{qid}: missing question mark"
        if expect == "AnswerNoWikiPage":
            assert answer not in resolver_table, qid
            continue
        assert answer in resolver_table, f"{qid}: answer {answer!r} not resolvable"
        major, _minor = classify(question)
        if expect == "DescriptionType":
            assert major == "DESCRIPTION", f"{qid}: classifier gave {major}"
            continue
        assert major != "DESCRIPTION", f"{qid}: unexpectedly classified DESCRIPTION"

        reply = q["answer_reply"]
        lowered = reply.lower()
        declined = any(s in lowered for s in _DECLINE_SUBSTRINGS)
        matched = answers_match(reply, answer)
        if expect == "AnswerNotFound":
            assert declined, f"{qid}: reply should decline"
            continue
        if expect == "AnswerMismatch":
            assert not declined and not matched, f"{qid}: reply should mismatch"
            continue
        assert expect in ("ok", "prune"), f"{qid}: unknown expectation {expect}"
        assert not declined, f"{qid}: answer reply trips a decline pattern"
        assert matched, f"{qid}: answer reply does not contain the answer"

        hints = q["hints"]
        assert len(hints) == HINTS_PER_QUESTION, f"{qid}: need 10 hints"
        kept = 0
        for text, kind, markers in hints:
            assert text not in texts_seen, f"duplicate hint text: {text!r}"
            texts_seen.add(text)
            report = leaks_answer(text, answer)
            if kind == "leak":
                assert report.leaked, f"{qid}: planted leak does not leak: {text!r}"
            else:
                assert not report.leaked, (
                    f"{qid}: {kind} hint leaks {sorted(report.overlap)}: {text!r}"
                )
            if kind == "keep":
                kept += 1
            assert set(markers) <= set(q["hint_sources"]), f"{qid}: marker without source"
        if expect == "prune":
            assert kept < 5, f"{qid}: prune plant kept {kept} hints"
        else:
            assert kept >= 5, f"{qid}: only {kept} hints survive"

        base = q["candidates"][:CANDIDATE_COUNT]
        matches = [c for c in base if answers_match(c, answer)]
        final = inject_ground_truth(q["candidates"], answer, limit=CANDIDATE_COUNT)
        assert len(matches) <= 1, f"{qid}: ambiguous candidate list"
        assert sum(answers_match(c, answer) for c in final) == 1, qid


def hint_reply_text(q: dict) -> str:
    lines = []
    for i, (text, _kind, markers) in enumerate(q["hints"], start=1):
        suffix = "".join(f" [{m}]" for m in markers)
        lines.append(f"{i}. {text}{suffix}")
    body = "\n".join(lines)
    if q["hint_sources"]:
        sources = "\n".join(f"[{k}] {url}" for k, url in sorted(q["hint_sources"].items()))
        body += f"\n\nSources:\n{sources}\n"
    return body


def build_e2e() -> dict:
    check_e2e_tables()
    write_jsonl(
        FIXTURES / "e2e_source.jsonl",
        [
            {
                "q_id": q["id"],
                "question": q["question"],
                "answer": q["answer"],
                "major_type": None,
                "minor_type": None,
            }
            for q in E2E_QUESTIONS
        ],
    )

    writer = FixtureWriter(FIXTURES / "e2e_replay.jsonl")
    generated = [q for q in E2E_QUESTIONS if q["expect"] in ("ok", "prune")]
    final_qs = [q for q in E2E_QUESTIONS if q["expect"] == "ok"]

    # Step responses: direct answers (with the two planted failures) + hints.
    for q in E2E_QUESTIONS:
        if "answer_reply" in q:
            writer.chat(q["question"], q["answer_reply"])
    for q in generated:
        prompt = HINT_PROMPT.format(n=HINTS_PER_QUESTION, question=q["question"])
        writer.chat(prompt, hint_reply_text(q))

    # Embeddings: the question plus every hint that survives the leak check.
    # Leaked hints are deliberately absent — the filters must never embed
    # them, and a missing digest makes any regression fail loudly.
    clean_cycle = 0
    for q in generated:
        writer.embed(q["question"], QUESTION_VECTOR)
        for h_idx, (text, kind, _markers) in enumerate(q["hints"]):
            if kind == "leak":
                continue
            if kind == "keep":
                vector = CLEAN_VECTORS[clean_cycle % len(CLEAN_VECTORS)]
                clean_cycle += 1
            elif q["id"] == "q26" and h_idx == 8:
                vector = VERY_SIMILAR_VECTOR
            else:
                vector = SIMILAR_VECTOR
            writer.embed(text, vector)

    # Candidate lists + judge verdicts for the records that reach scoring.
    zero_conv_hints = 0
    kept_counter = 0
    for q_idx, q in enumerate(final_qs):
        prompt = CANDIDATE_PROMPT.format(n=20, question=q["question"])
        writer.chat(
            prompt,
            "\n".join(f"{i}. {c}" for i, c in enumerate(q["candidates"], start=1)),
        )
        final = inject_ground_truth(q["candidates"], q["answer"], limit=CANDIDATE_COUNT)
        kept_hints = [t for t, kind, _ in q["hints"] if kind == "keep"]
        for h_idx, hint_text in enumerate(kept_hints):
            answer_no = kept_counter % 17 == 5
            if answer_no:
                zero_conv_hints += 1
            kept_counter += 1
            for c_idx, candidate in enumerate(final):
                if answers_match(candidate, q["answer"]):
                    verdict = "No, it refers to something else." if answer_no else "Yes."
                else:
                    yes = (q_idx * 3 + h_idx * 5 + c_idx * 7) % 4 == 0
                    verdict = "Yes." if yes else "No."
                writer.chat(JUDGE_PROMPT.format(hint=hint_text, candidate=candidate), verdict)

    # Pageview lookups mirror exactly what familiarity scoring will request:
    # entities of kept hints, entities of the question, and the answer page.
    extractor = GazetteerEntityExtractor(GAZETTEER)
    titles: set[str] = set()
    for q in final_qs:
        for text, kind, _markers in q["hints"]:
            if kind == "keep":
                titles.update(m.wiki_title for m in extractor.extract(text))
        titles.update(m.wiki_title for m in extractor.extract(q["question"]))
        resolved = GAZETTEER[q["answer"]]
        titles.add(GAZETTEER.get(resolved, resolved))
    assert MISSING_ARTICLE in titles, "missing-article plant never gets fetched"
    for title in sorted(titles):
        if title == MISSING_ARTICLE:
            writer.pageviews(title, {"missing": True})
        else:
            writer.pageviews(title, month_payload(CURATED_VIEWS.get(title, fallback_views(title))))

    n_entries = writer.write()

    kept_total = sum(
        sum(kind == "keep" for _, kind, _ in q["hints"]) for q in generated
    )
    leak_total = sum(
        sum(kind == "leak" for _, kind, _ in q["hints"]) for q in generated
    )
    similar_total = sum(
        sum(kind == "similar" for _, kind, _ in q["hints"]) for q in generated
    )
    hints_in = HINTS_PER_QUESTION * len(generated)
    assert kept_total + leak_total + similar_total == hints_in
    pruned = [q["id"] for q in E2E_QUESTIONS if q["expect"] == "prune"]
    final_hints = kept_total - sum(
        sum(kind == "keep" for _, kind, _ in q["hints"])
        for q in generated
        if q["expect"] == "prune"
    )

    expected = {
        "config": {
            "offline": True,
            "classifier": "keyword",
            "hints_per_question": HINTS_PER_QUESTION,
            "candidate_count": CANDIDATE_COUNT,
            "sample_fraction": 1.0,
            "seed": 13,
            "min_hints": 5,
            "aggregate_mode": "avg",
            "similarity_threshold": SIMILARITY_CUTOFF,
            "parallelism": 4,
        },
        "source_rows": len(E2E_QUESTIONS),
        "final_count": len(final_qs),
        "final_q_ids": [q["id"] for q in final_qs],
        "final_hint_total": final_hints,
        "zero_convergence_hints": zero_conv_hints,
        "stages": {
            "filter": {
                "in": len(E2E_QUESTIONS),
                "out": 22,
                "detail": {
                    "TooShort": 1,
                    "TooLong": 1,
                    "NoQuestionMark": 1,
                    "AnswerNoWikiPage": 1,
                },
            },
            "classify": {"in": 22, "out": 20, "detail": {"DescriptionType": 2}},
            "sample": {"in": 20, "out": 20, "detail": {"not_sampled": 0}},
            "generate": {
                "in": 20,
                "out": len(generated),
                "detail": {"AnswerNotFound": 1, "AnswerMismatch": 1},
            },
            "filter_hints": {
                "in": len(generated),
                "out": len(generated),
                "detail": {
                    "hints_in": hints_in,
                    "hints_kept": kept_total,
                    "hints_leaked": leak_total,
                    "hints_too_similar": similar_total,
                    "no_hints_left": 0,
                },
            },
            "prune": {
                "in": len(generated),
                "out": len(final_qs),
                "detail": {"below_min_hints": len(pruned), "q_ids": pruned},
            },
            "score_hicos": {"in": len(final_qs), "out": len(final_qs), "detail": {}},
            "score_hifas": {"in": len(final_qs), "out": len(final_qs), "detail": {}},
            "stats": {"in": len(final_qs), "out": len(final_qs), "detail": {}},
        },
    }
    with open(FIXTURES / "e2e_expected.json", "w", encoding="utf-8") as fh:
        json.dump(expected, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"replay_entries": n_entries, "pageview_titles": len(titles)}


# ---------------------------------------------------------------------------
# sweep fixture


def sweep_scores_at(n: int) -> list[Fraction]:
    """Planted convergence scores at candidate-list size n, exact arithmetic."""
    scores = []
    for _text, valid, extra, _rating in SWEEP_HINTS:
        if not valid:
            scores.append(Fraction(0))
            continue
        yes_total = 1 + sum(1 for p in extra if p < n)
        scores.append(Fraction(n - yes_total + 1, n))
    return scores


def build_sweep() -> dict:
    from hintkit.model import Hint, MajorType, QuestionRecord, save_dataset

    assert len(SWEEP_CANDIDATES) == 20
    assert all(not answers_match(c, SWEEP_ANSWER) for c in SWEEP_CANDIDATES[1:])
    assert answers_match(SWEEP_CANDIDATES[0], SWEEP_ANSWER)
    for _text, _valid, extra, _rating in SWEEP_HINTS:
        assert all(1 <= p <= 10 for p in extra), "extra-valid sets must sit in {1..10}"

    # Independent verification of the planted curve before anything is written.
    scaled = [(rating - 1) / 4 for *_x, rating in SWEEP_HINTS]
    curve: list[tuple[int, float]] = []
    for n in SWEEP_N_RANGE:
        metric = [float(s) for s in sweep_scores_at(n)]
        r = float(np.corrcoef(scaled, metric)[0, 1])
        assert math.isfinite(r) and -1.0 <= r <= 1.0, f"n={n}: r={r}"
        curve.append((n, r))
    best_n, best_r = max(curve, key=lambda point: point[1])
    runner_up = max(r for n, r in curve if n != best_n)
    assert best_n == SWEEP_BEST_N, f"planted optimum landed at {best_n}"
    margin = best_r - runner_up
    assert margin >= 0.01, f"optimum margin too thin: {margin}"

    record = QuestionRecord(
        q_id="sw1",
        question=SWEEP_QUESTION,
        exact_answer=SWEEP_ANSWER,
        major_type=MajorType.LOCATION,
        minor_type="LOC:other",
        hints=tuple(Hint(text=text) for text, *_rest in SWEEP_HINTS),
        candidate_answers=tuple(SWEEP_CANDIDATES),
    )
    save_dataset([record], FIXTURES / "sweep_dataset.jsonl")

    ratings = []
    for idx, (_text, _valid, _extra, rating) in enumerate(SWEEP_HINTS):
        annotators = ("a1", "a2") if idx == 0 else ("a1",)
        for annotator in annotators:
            ratings.append(
                {
                    "annotator_id": annotator,
                    "session_id": "s1",
                    "q_id": "sw1",
                    "hint_idx": idx,
                    "relevance": 3,
                    "readability": 4,
                    "ambiguity": 3,
                    "convergence": rating,
                    "familiarity": 3,
                    "google_found": False,
                    "bing_found": False,
                }
            )
    write_jsonl(FIXTURES / "sweep_ratings.jsonl", ratings)

    writer = FixtureWriter(FIXTURES / "sweep_replay.jsonl")
    for text, valid, extra, _rating in SWEEP_HINTS:
        for c_idx, candidate in enumerate(SWEEP_CANDIDATES):
            if c_idx == 0:
                verdict = "Yes." if valid else "No."
            else:
                verdict = "Yes." if c_idx in extra else "No."
            writer.chat(JUDGE_PROMPT.format(hint=text, candidate=candidate), verdict)
    n_entries = writer.write()

    with open(FIXTURES / "sweep_expected.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "best_n": best_n,
                "margin_over_runner_up": margin,
                "n_samples": len(SWEEP_HINTS),
                "curve": [{"n": n, "pearson_r": r} for n, r in curve],
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    return {"replay_entries": n_entries, "best_n": best_n, "margin": round(margin, 4)}


# ---------------------------------------------------------------------------
# filter fixture


def build_filter() -> dict:
    clean = [
        f"{subject} {predicate}."
        for subject in _CLEAN_SUBJECTS
        for predicate in _CLEAN_PREDICATES
    ][:140]
    leaks = [stem.format(form) for stem in _LEAK_STEMS for form in _LEAK_FORMS]
    rephrases = list(_REPHRASES)
    assert len(clean) == 140 and len(leaks) == 40 and len(rephrases) == 20

    rows = (
        [(text, "clean") for text in clean]
        + [(text, "leak") for text in leaks]
        + [(text, "rephrase") for text in rephrases]
    )
    all_texts = [text for text, _ in rows]
    assert len(set(all_texts)) == len(rows) == 200, "hint texts must be unique"
    random.Random(7).shuffle(rows)

    writer = FixtureWriter(FIXTURES / "filter_replay.jsonl")
    writer.embed(FILTER_QUESTION, QUESTION_VECTOR)
    clean_i = 0
    rephrase_i = 0
    for text, label in rows:
        leaked = leaks_answer(text, FILTER_ANSWER).leaked
        assert leaked == (label == "leak"), f"leak plant mismatch: {text!r}"
        if label == "leak":
            continue  # leaked hints are never embedded; omit their vectors
        if label == "clean":
            vector = CLEAN_VECTORS[clean_i % len(CLEAN_VECTORS)]
            clean_i += 1
        elif rephrase_i == 0:
            vector = BOUNDARY_VECTOR
            rephrase_i += 1
        else:
            vector = _REPHRASE_VECTORS[(rephrase_i - 1) % len(_REPHRASE_VECTORS)]
            rephrase_i += 1
        cos = cosine_to_unit_x(vector)
        if label == "rephrase":
            assert cos >= SIMILARITY_CUTOFF, f"rephrase vector below cutoff: {cos}"
        else:
            assert cos < SIMILARITY_CUTOFF, f"clean vector at/above cutoff: {cos}"
        writer.embed(text, vector)
    boundary = cosine_to_unit_x(BOUNDARY_VECTOR)
    assert boundary == SIMILARITY_CUTOFF, f"boundary cosine is {boundary!r}, not 0.72"
    n_entries = writer.write()

    write_jsonl(
        FIXTURES / "filter_corpus.jsonl",
        [{"hint": text, "planted": label} for text, label in rows],
    )
    with open(FIXTURES / "filter_meta.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "question": FILTER_QUESTION,
                "answer": FILTER_ANSWER,
                "counts": {"clean": 140, "leak": 40, "rephrase": 20},
                "boundary_hint": next(t for t, l in rows if l == "rephrase"),
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    return {"replay_entries": n_entries}


# ---------------------------------------------------------------------------
# statistics fixture


def _strip_markers(text: str) -> str:
    import re as _re

    return " ".join(_re.sub(r"\[\d+\]", " ", text).split())


def build_stats() -> dict:
    from hintkit.analytics import dataset_stats
    from hintkit.model import (
        EntityMention,
        Hint,
        QuestionRecord,
        load_dataset,
        save_dataset,
    )

    extractor = GazetteerEntityExtractor(GAZETTEER)
    classifier = KeywordTypeClassifier()

    sources = [
        q for q in E2E_QUESTIONS if q["expect"] in ("ok", "prune")
    ]
    content = [
        {
            "id": f"sd{i + 1:02d}",
            "question": q["question"],
            "answer": q["answer"],
            "snippet": _strip_markers(q["answer_reply"].split("\n")[0]),
            "hints": [t for t, kind, _ in q["hints"] if kind == "keep"],
        }
        for i, q in enumerate(sources)
    ] + STATS_EXTRA
    assert len(content) == 20

    records = []
    raw_rows = []  # plain values for the independent golden computation
    for i, item in enumerate(content):
        label = classifier.classify(item["question"])
        q_mentions = extractor.extract(item["question"])
        q_pop = tuple(
            round(0.1 + ((i * 7 + k * 13) % 80) / 100, 2) for k in range(len(q_mentions))
        )
        snippet_sources = tuple(
            f"https://ref.example/s/{item['id']}/{k}" for k in range(i % 4)
        )
        hints = []
        hint_rows = []
        for j, text in enumerate(item["hints"]):
            mentions = extractor.extract(text)
            entities = tuple(
                EntityMention(
                    surface=m.surface,
                    wiki_title=m.wiki_title,
                    raw_views=float(CURATED_VIEWS.get(m.wiki_title, fallback_views(m.wiki_title))),
                )
                for m in mentions
            )
            h_pop = tuple(
                round(0.05 + ((i * 5 + j * 3 + k) % 90) / 100, 2)
                for k in range(len(entities))
            )
            hints.append(
                Hint(
                    text=text,
                    entities=entities,
                    h_popularity=h_pop,
                    convergence_score=round(0.15 + ((i * 5 + j) % 80) / 100, 2),
                    familiarity_score=round(0.12 + ((i * 3 + 2 * j) % 80) / 100, 2),
                    leak_flag=False,
                    question_similarity=round(0.10 + ((i * 3 + j) % 60) / 100, 2),
                )
            )
            hint_rows.append({"text": text, "n_entities": len(entities)})
        records.append(
            QuestionRecord(
                q_id=item["id"],
                question=item["question"],
                exact_answer=item["answer"],
                major_type=label.major,
                minor_type=label.minor,
                snippet=item["snippet"],
                snippet_sources=snippet_sources,
                hints=tuple(hints),
                q_popularity=q_pop,
                exact_answer_popularity=(
                    None if i % 5 == 0 else round(0.2 + (i % 70) / 100, 2)
                ),
                convergence=round(0.2 + (i % 60) / 100, 2),
                familiarity=round(0.25 + (i % 55) / 100, 2),
            )
        )
        raw_rows.append(
            {
                "question": item["question"],
                "hints": hint_rows,
                "n_q_entities": len(q_pop),
                "n_sources": len(snippet_sources),
            }
        )

    path = FIXTURES / "stats_dataset.jsonl"
    save_dataset(records, path)
    load_dataset(path)  # round-trip sanity: the file parses and validates

    # Golden aggregates from the raw content with independent arithmetic.
    n_questions = len(raw_rows)
    all_hints = [h for row in raw_rows for h in row["hints"]]
    n_hints = len(all_hints)
    golden = {
        "n_questions": n_questions,
        "n_hints": n_hints,
        "avg_question_len": sum(independent_word_count(r["question"]) for r in raw_rows)
        / n_questions,
        "avg_hint_len": sum(independent_word_count(h["text"]) for h in all_hints) / n_hints,
        "avg_hints_per_q": n_hints / n_questions,
        "avg_entities_per_q": sum(r["n_q_entities"] for r in raw_rows) / n_questions,
        "avg_entities_per_hint": sum(h["n_entities"] for h in all_hints) / n_hints,
        "avg_sources_per_q": sum(r["n_sources"] for r in raw_rows) / n_questions,
    }
    with open(FIXTURES / "stats_golden.json", "w", encoding="utf-8") as fh:
        json.dump(golden, fh, indent=2, sort_keys=True)
        fh.write("\n")

    # Cross-check: the library must agree with the golden numbers exactly.
    library_view = dataset_stats(records).to_dict()
    assert library_view == golden, f"stats disagree:\n{library_view}\nvs\n{golden}"
    return {"records": n_questions, "hints": n_hints}


# ---------------------------------------------------------------------------
# shared support files


def build_support() -> dict:
    with open(FIXTURES / "gazetteer.json", "w", encoding="utf-8") as fh:
        json.dump({"titles": GAZETTEER}, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    rng = random.Random(20240811)
    write_jsonl(
        FIXTURES / "calibration.jsonl",
        [
            {"title": f"Calibration Article {i:03d}", "mean_monthly_views": rng.randint(0, 1_000_000)}
            for i in range(500)
        ],
    )
    return {"gazetteer_titles": len(GAZETTEER), "calibration_rows": 500}


def main() -> None:
    summary = {
        "support": build_support(),
        "e2e": build_e2e(),
        "sweep": build_sweep(),
        "filter": build_filter(),
        "stats": build_stats(),
    }
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
