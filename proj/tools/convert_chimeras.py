#!/usr/bin/env python3
"""Convert a chimera release file to the canonical trial TSV read by n2v.

Output, one trial per line:
    id<TAB>sentence @@ sentence ...<TAB>probe,probe,...<TAB>rating,rating,...

Accepted input layouts (tab-separated, detected per line):
    nonce<TAB>passage<TAB>probes<TAB>ratings[<TAB>...]
    passage<TAB>probes<TAB>ratings

See README.md for the conversion rules.
"""

import argparse
import re
import sys

SLOT = "___"
SEPARATOR = "@@"


def split_list(field):
    return [x.strip() for x in re.split(r"[,;]", field) if x.strip()]


def parse_ratings(field):
    try:
        return [float(x) for x in split_list(field)]
    except ValueError:
        return None


def slot_sentence(sentence, nonce):
    out = []
    for tok in sentence.split():
        low = tok.lower()
        if low == SLOT or (nonce and low == nonce):
            out.append(SLOT)
        else:
            out.append(low)
    return " ".join(out)


def convert_line(fields, number):
    """Returns (id, sentences, probes, ratings) or raises ValueError."""
    if len(fields) >= 4 and parse_ratings(fields[3]) is not None and SEPARATOR in fields[1]:
        nonce, passage, probes, ratings = fields[0].strip().lower(), fields[1], fields[2], fields[3]
        trial_id = nonce or f"trial{number}"
    elif len(fields) >= 3 and parse_ratings(fields[2]) is not None:
        nonce, passage, probes, ratings = "", fields[0], fields[1], fields[2]
        trial_id = f"trial{number}"
    else:
        raise ValueError("unrecognized layout")
    sentences = [slot_sentence(s, nonce) for s in passage.split(SEPARATOR) if s.strip()]
    for i, s in enumerate(sentences):
        if SLOT not in s.split():
            raise ValueError(f"sentence {i + 1} has no occurrence of the nonce")
    probe_list = [p.lower() for p in split_list(probes)]
    rating_list = parse_ratings(ratings)
    if len(probe_list) != len(rating_list):
        raise ValueError(f"{len(probe_list)} probes but {len(rating_list)} ratings")
    return trial_id, sentences, probe_list, rating_list


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("input", help="release file")
    ap.add_argument("output", help="canonical TSV to write")
    ap.add_argument("--n", type=int, choices=(2, 4, 6), help="keep only trials with this many sentences")
    args = ap.parse_args()

    seen = {}
    written = rejected = 0
    with open(args.input, encoding="utf-8") as src, open(args.output, "w", encoding="utf-8") as dst:
        for number, line in enumerate(src, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            try:
                trial_id, sentences, probes, ratings = convert_line(line.split("\t"), number)
            except ValueError as e:
                if number == 1:
                    continue  # header row
                print(f"{args.input}:{number}: {e}", file=sys.stderr)
                rejected += 1
                continue
            if args.n is not None and len(sentences) != args.n:
                continue
            seen[trial_id] = seen.get(trial_id, 0) + 1
            if seen[trial_id] > 1:
                trial_id = f"{trial_id}_{seen[trial_id]}"
            dst.write(
                "\t".join(
                    [
                        trial_id,
                        f" {SEPARATOR} ".join(sentences),
                        ",".join(probes),
                        ",".join(repr(r) if r != int(r) else str(int(r)) for r in ratings),
                    ]
                )
                + "\n"
            )
            written += 1
    print(f"wrote {written} trials, rejected {rejected} lines", file=sys.stderr)
    return 0 if written else 1


if __name__ == "__main__":
    sys.exit(main())
