#!/usr/bin/env python3
"""Generate the synthetic fixture corpus under data/fixtures/.

The words are invented. They follow simple suffix and vowel-change rules so
that small models can learn them; they are not a substitute for real
lexical data.
"""

import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"

ONSETS = ["b", "bl", "br", "d", "dr", "f", "fl", "fr", "g", "gl", "gr", "k", "kl", "kr", "l", "m", "n",
          "p", "pl", "pr", "r", "s", "sk", "sl", "sm", "sn", "sp", "st", "str", "t", "tr", "v", "w", "z"]
VOWELS = ["a", "e", "i", "o", "u", "ee", "oo", "ai"]
CODAS = ["b", "d", "g", "k", "l", "m", "n", "p", "t", "sh", "mp", "nt", "lk", "rd", "sk", "st"]

# English vowel-change classes: rime -> past rime.
EN_IRREGULAR = {"ing": "ang", "ink": "ank", "eep": "ept", "ind": "ound", "ow": "ew", "ear": "ore", "ide": "ode"}


def syllable(rng):
    return rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS)


def english_past(lemma):
    if lemma.endswith("e"):
        return lemma + "d"
    return lemma + "ed"


def english(rng, n_regular, n_irregular, taken):
    rows = []
    while sum(1 for r in rows if r[3] == "regular") < n_regular:
        lemma = syllable(rng) if rng.random() < 0.8 else syllable(rng) + "e"
        if lemma in taken:
            continue
        taken.add(lemma)
        rows.append((lemma, english_past(lemma), "PST", "regular"))
    rimes = list(EN_IRREGULAR)
    while sum(1 for r in rows if r[3] == "irregular") < n_irregular:
        rime = rng.choice(rimes)
        lemma = rng.choice(ONSETS) + rime
        if lemma in taken:
            lemma = rng.choice(ONSETS) + rng.choice(VOWELS[:5]) + rng.choice(ONSETS) + rime
        if lemma in taken:
            continue
        taken.add(lemma)
        rows.append((lemma, lemma[: -len(rime)] + EN_IRREGULAR[rime], "PST", "irregular"))
    rng.shuffle(rows)
    return rows


UMLAUT = {"a": "ä", "o": "ö", "u": "ü"}


def umlaut(word):
    for i in range(len(word) - 1, -1, -1):
        if word[i] in UMLAUT:
            return word[:i] + UMLAUT[word[i]] + word[i + 1:]
    return word


def german_noun(rng):
    # (singular, plural, gender, class)
    kind = rng.choices(["en", "e", "zero", "er", "s"], weights=[35, 28, 20, 8, 9])[0]
    stem = rng.choice(ONSETS) + rng.choice(["a", "e", "i", "o", "u", "au", "ei"]) + rng.choice(
        ["b", "d", "g", "k", "l", "m", "n", "p", "t", "ch", "nd", "ld", "rm", "st"])
    if kind == "en":
        if rng.random() < 0.6:
            sg = stem + "e"
            return sg, sg + "n", "FEM", "en"
        return stem + "ung", stem + "ungen", "FEM", "en"
    if kind == "e":
        return stem, (umlaut(stem) if rng.random() < 0.3 else stem) + "e", "MASC", "e"
    if kind == "zero":
        sg = stem + rng.choice(["el", "er", "chen"])
        return sg, sg, rng.choice(["MASC", "NEUT"]), "zero"
    if kind == "er":
        return stem, umlaut(stem) + "er", "NEUT", "er"
    sg = stem + rng.choice(["a", "o", "i"])
    return sg, sg + "s", rng.choice(["MASC", "NEUT", "FEM"]), "s"


def german(rng, n, taken):
    rows = []
    while len(rows) < n:
        sg, pl, gender, cls = german_noun(rng)
        if sg in taken:
            continue
        taken.add(sg)
        rows.append((sg, pl, "PL;" + gender, cls))
    return rows


def write_dataset(path, lang, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# lang={lang} columns=lemma,form,tags,class\n")
        f.write("# synthetic fixture: invented words, not lexical data\n")
        for row in rows:
            f.write("\t".join(row) + "\n")


def english_wugs(rng, taken):
    lemmas = []
    rimes = list(EN_IRREGULAR)
    while len(lemmas) < 58:
        lemma = rng.choice(ONSETS) + rng.choice(rimes)
        if lemma not in taken:
            taken.add(lemma)
            lemmas.append(lemma)
    rows = []
    for i, lemma in enumerate(lemmas):
        rime = next(r for r in rimes if lemma.endswith(r))
        reg_prod = rng.uniform(0.4, 0.95)
        rows.append((lemma, english_past(lemma), "regular", rng.uniform(4.0, 6.8), reg_prod))
        alt = [lemma[: -len(rime)] + EN_IRREGULAR[rime]]
        if i >= 42:
            other = rng.choice([r for r in rimes if r != rime])
            alt.append(lemma[: -len(rime)] + EN_IRREGULAR[other])
        left = 0.98 - reg_prod
        for j, form in enumerate(alt):
            share = left * (0.7 if j == 0 else 0.3) if len(alt) > 1 else left
            rows.append((lemma, form, "irregular", rng.uniform(1.5, 5.5), share))
    return rows


def german_wugs(rng, taken):
    rows = []
    for i in range(24):
        while True:
            stem = rng.choice(ONSETS) + rng.choice(["a", "o", "u", "au"]) + rng.choice(["b", "d", "g", "k", "m", "n"])
            if stem not in taken:
                taken.add(stem)
                break
        context = "R" if i < 12 else "NR"
        base = {"en": 3.2, "e": 3.6, "zero": 2.2, "er": 2.4, "s": 2.8}
        if context == "NR":
            base["s"] += 0.6
        forms = {"en": stem + "en", "e": stem + "e", "zero": stem, "er": umlaut(stem) + "er", "s": stem + "s"}
        weights = {k: rng.uniform(0.2, 1.0) * v for k, v in base.items()}
        total = sum(weights.values())
        for cls in ["en", "e", "zero", "er", "s"]:
            rating = min(5.0, max(1.0, base[cls] + rng.gauss(0.0, 0.6)))
            rows.append((stem, forms[cls], cls, rating, weights[cls] / total * 0.98, context))
    return rows


def write_wugs(path, lang, scale, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# lang={lang} rating_scale={scale[0]},{scale[1]}\n")
        f.write("# synthetic fixture: invented nonce words and judgments\n")
        for row in rows:
            cells = [row[0], row[1], row[2], f"{row[3]:.2f}", f"{row[4]:.3f}"] + list(row[5:])
            f.write("\t".join(cells) + "\n")


def main():
    rng = random.Random(20240601)
    OUT.mkdir(parents=True, exist_ok=True)
    taken = set()
    write_dataset(OUT / "en_verbs.tsv", "en", english(rng, 220, 60, taken))
    write_dataset(OUT / "de_nouns.tsv", "de", german(rng, 280, taken))
    write_wugs(OUT / "en_wugs.tsv", "en", (1, 7), english_wugs(rng, taken))
    write_wugs(OUT / "de_wugs.tsv", "de", (1, 5), german_wugs(rng, taken))


if __name__ == "__main__":
    main()
