"""Builds crosswords.json: each clue gets its answer plus ten distractors drawn from other puzzles."""
import json
import random

SOURCE = "crosswords_source.json"
OUT = "crosswords.json"
LIST_LEN = 11


def words(letters):
    rows = ["".join(letters[r * 5:(r + 1) * 5]) for r in range(5)]
    cols = ["".join(letters[c::5]) for c in range(5)]
    return rows + cols, rows


def overlap(a, b):
    return sum(x == y for x, y in zip(a, b))


def main():
    src = json.load(open(SOURCE))
    pool = sorted({w for clues, letters in src for w in words(letters)[0]})
    rng = random.Random(505)
    out = []
    for clues, letters in src:
        answers, rows = words(letters)
        candidates = []
        for ans in answers:
            near = [w for w in pool if w != ans and overlap(w, ans) >= 2]
            far = [w for w in pool if w != ans and overlap(w, ans) < 2]
            rng.shuffle(near)
            rng.shuffle(far)
            picks = (near + far)[: LIST_LEN - 1] + [ans]
            rng.shuffle(picks)
            candidates.append(picks)
        out.append({"clues": clues, "candidates": candidates, "ground_truth": rows})
    with open(OUT, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
