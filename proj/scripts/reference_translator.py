#!/usr/bin/env python3
"""Line-protocol translator: {"id", "texts", "src", "tgt"} in,
{"id", "texts"} out.

Translation is a lookup in a JSON phrase table (exact text match);
texts without an entry pass through unchanged. Good enough to exercise
the code-mix pipelines deterministically.
"""

import argparse
import json
import sys


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--table", help="JSON file: {source text: translation}")
    parser.add_argument(
        "--fault",
        choices=["wrong-id", "wrong-count", "garbage"],
        help="deliberately violate the protocol",
    )
    args = parser.parse_args()

    table = {}
    if args.table:
        with open(args.table, encoding="utf-8") as fh:
            table = json.load(fh)

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        translated = [table.get(text, text) for text in request["texts"]]
        response = {"id": request["id"], "texts": translated}

        if args.fault == "wrong-id":
            response["id"] = request["id"] + 1
        elif args.fault == "wrong-count":
            response["texts"] = translated[:-1] if translated else [""]
        elif args.fault == "garbage":
            print("this is not json", flush=True)
            continue

        print(json.dumps(response), flush=True)


if __name__ == "__main__":
    main()
