"""Synthetic training corpus and prompt-file generation.

Everything here is deterministic given a seed. The sentence grammar is built
for context diversity rather than realism: frequent function words are always
followed by draws from wide word banks, which keeps repeated context/token
bigrams rare in sampled text.
"""

from __future__ import annotations

import json
import random
from typing import Iterable

_NOUNS = """
river harbor engine garden signal market lantern meadow circuit ledger anchor
valley workshop compass orchard furnace archive beacon canyon festival glacier
habitat island journal kettle library machine nursery outpost pavilion quarry
reservoir saddle telescope uniform village warehouse airfield balcony cathedral
dividend estuary fortress gateway hillside inlet junction kingdom lighthouse
monument notebook observatory peninsula quartet railway sanctuary terrace
umbrella vineyard waterfall workshop atlas barometer chandelier dormitory
easel fountain greenhouse hammock incubator jetty kiln loom mosaic
nebula oasis pantry quill rudder sextant trellis urn vault windmill
yacht zeppelin aqueduct bakery cellar dam embankment ferry granary hangar
mill orchard pier reservoir silo tannery viaduct wharf academy bridge
canal depot exchange foundry grove hostel institute jubilee kiosk landing
manor nook opera plaza refinery stable tower union veranda well
almanac bassoon cello drum ensemble flute guitar harp organ piano
""".split()

_VERBS = """
crossed measured repaired watered tracked opened carried mapped welded audited
sketched guarded climbed harvested stoked indexed lit charted attended polished
restored surveyed flooded anchored rebuilt tested washed labeled stored fenced
painted toured documented drained supplied braced rented cleaned plowed staffed
visited sealed scanned funded leased paved insured weighed shipped stacked
trimmed logged heated cooled sorted boxed wired tiled sanded roofed
charted briefed judged timed scored filmed taped staged hosted coached
moored plotted pruned raked seeded shelved skimmed soldered steered tuned
varnished vented welded wound zoned binned calibrated dredged etched forged
""".split()

_ADJECTIVES = """
amber brisk coastal dusty eager faded granite hollow iron jade keen limber
marble narrow oak pale quiet rust silver timber upper violet warm young
coppery damp elder foggy gilded humid icy lofty mossy noble ochre
polished quartz rural shaded tidal urban vast windy arid bright calm
deep early fresh grand high inner low mild north outer plain
round south steep tall wide level minor major spare sturdy
""".split()

_ADVERBS = """
briskly calmly daily early eagerly evenly gently hourly lately loudly neatly
nightly often promptly quietly rarely slowly softly soon steadily swiftly
twice weekly yearly barely later nearby overnight midway
""".split()

_NAMES = """
arden bellamy calder dorian elsworth farrow graylen holloway iver juniper
kestrel larkin merrit norwood oakes penrose quimby rowan sable thatcher
underhill vesper wexford yarrow ashby birch cole dane ellison frost
govern hale ingram jasper kirby lowell
""".split()

_DETERMINERS = """
the a this that each one every some another its their his her
""".split()

_PREPOSITIONS = """
near beside under over behind along past beyond across through around toward
within against below
""".split()

_CONJUNCTIONS = """
and but while then so yet although because before after once until
""".split()

_PRONOUNS = "it she he they we nobody everyone somebody".split()

_END_PUNCT = [".", ".", ".", "!", "?"]

SUBSETS = ["longform_qa", "finance_qa", "multi_news", "qmsum", "alpacafarm"]


def _noun_phrase(rng: random.Random) -> list[str]:
    roll = rng.random()
    if roll < 0.18:
        return [rng.choice(_NAMES)]
    det = rng.choice(_DETERMINERS)
    if roll < 0.60:
        return [det, rng.choice(_ADJECTIVES), rng.choice(_NOUNS)]
    return [det, rng.choice(_NOUNS)]


def _verb_phrase(rng: random.Random) -> list[str]:
    verb = rng.choice(_VERBS)
    roll = rng.random()
    if roll < 0.25:
        return [verb, rng.choice(_ADVERBS)]
    if roll < 0.65:
        return [verb] + _noun_phrase(rng)
    return [verb, rng.choice(_PREPOSITIONS)] + _noun_phrase(rng)


def _sentence(rng: random.Random) -> str:
    words: list[str] = []
    start = rng.random()
    if start < 0.14:
        words.append(rng.choice(_PRONOUNS))
        words += _verb_phrase(rng)
    elif start < 0.26:
        words.append(rng.choice(_ADVERBS))
        words += _noun_phrase(rng)
        words += _verb_phrase(rng)
    else:
        words += _noun_phrase(rng)
        words += _verb_phrase(rng)
    if rng.random() < 0.35:
        words.append(",")
        words.append(rng.choice(_CONJUNCTIONS))
        words += _noun_phrase(rng)
        words += _verb_phrase(rng)
    body = " ".join(words).replace(" ,", ",")
    return body + rng.choice(_END_PUNCT)


def default_training_corpus(n_sentences: int = 6000, seed: int = 20_240_601) -> list[str]:
    """Deterministic sentence corpus used to train the bundled surrogate model."""
    rng = random.Random(seed)
    return [_sentence(rng) for _ in range(n_sentences)]


def _prompt_for(subset: str, rng: random.Random) -> dict:
    topic = f"{rng.choice(_ADJECTIVES)} {rng.choice(_NOUNS)}"
    other = rng.choice(_NOUNS)
    if subset == "longform_qa":
        prompt = f"explain why the {topic} matters for the {other} and how it changed over time."
        context = None
    elif subset == "finance_qa":
        prompt = f"should i keep funding the {topic} or move the budget toward the {other}?"
        context = None
    elif subset == "multi_news":
        prompt = f"summarize the reports about the {topic}."
        context = " ".join(_sentence(rng) for _ in range(8))
    elif subset == "qmsum":
        prompt = f"what did the group decide about the {topic}?"
        context = " ".join(_sentence(rng) for _ in range(12))
    elif subset == "alpacafarm":
        prompt = f"write a short note about the {topic} near the {other}."
        context = None
    else:
        raise ValueError(f"unknown subset {subset!r}")
    return {"prompt": prompt, "context": context}


def generate_prompts(n: int, seed: int = 7, subsets: Iterable[str] | None = None) -> list[dict]:
    """Synthetic prompts cycling through the benchmark-style subsets."""
    chosen = list(subsets) if subsets is not None else list(SUBSETS)
    for s in chosen:
        if s not in SUBSETS:
            raise ValueError(f"unknown subset {s!r}")
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        subset = chosen[i % len(chosen)]
        row = {"prompt_id": f"p{i:05d}", "subset": subset}
        row.update(_prompt_for(subset, rng))
        if row["context"] is None:
            del row["context"]
        rows.append(row)
    return rows


def write_prompt_file(path: str, rows: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
            count += 1
    return count


def load_prompt_file(path: str) -> list[dict]:
    from chainwash.errors import ConfigurationError

    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read prompt file {path}: {exc}") from exc
    rows = []
    with fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"{path}:{line_no}: bad JSON: {exc}") from exc
            if "prompt_id" not in row or "prompt" not in row:
                raise ConfigurationError(f"{path}:{line_no}: missing prompt_id/prompt fields")
            row.setdefault("subset", "unknown")
            rows.append(row)
    if not rows:
        raise ConfigurationError(f"prompt file {path} is empty")
    return rows
