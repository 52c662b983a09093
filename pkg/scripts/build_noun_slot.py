#!/usr/bin/env python3
"""Convert an externally obtained noun export into lexicon slot lines.

The bundled lexicon ships with ~120 common gendered nouns.  A much larger
inventory (the ~10k nouns taking the article "de") can be obtained from the
Algemeen Nederlands Woordenboek (https://anw.ivdnt.org); its license does
not permit bundling, so download an export yourself and point this script
at it.

Input: a text file with one noun per line (lemma only, no article).
Output: `slot NP : ...` lines to stdout, ready to append to a lexicon file.

Usage:
    python scripts/build_noun_slot.py nouns.txt >> my_lexicon.txt
"""

import argparse
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("nouns", help="text file, one bare noun per line")
    parser.add_argument("--article", default="de",
                        help="article to prefix (default: de)")
    parser.add_argument("--per-line", type=int, default=10,
                        help="entries per slot line (default: 10)")
    args = parser.parse_args()

    seen: set[str] = set()
    nouns: list[str] = []
    with open(args.nouns, encoding="utf-8") as fh:
        for raw in fh:
            noun = raw.strip()
            if not noun or noun.startswith("#") or " " in noun:
                continue
            if noun.lower() in seen:
                continue
            seen.add(noun.lower())
            nouns.append(noun.lower())

    if not nouns:
        print("error: no usable nouns found", file=sys.stderr)
        return 2

    for start in range(0, len(nouns), args.per_line):
        chunk = nouns[start : start + args.per_line]
        entries = " ; ".join(f"{args.article} {n}" for n in chunk)
        print(f"slot NP : {entries}")
    print(f"# {len(nouns)} nouns", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
