#!/usr/bin/env python3
"""Line-protocol scorer: {"id", "texts"} in, {"id", "scores"} out.

Scores are smoothed unigram log-probabilities over an optional frequency
file, matching the built-in corpus scorer:

    p(w) = (count(w) + delta) / (total + delta * (V + 1))
    score(text) = sum over space-separated words of ln p(w)

--fault injects one kind of protocol violation, for adapter error tests.
"""

import argparse
import json
import math
import sys


def load_corpus(path):
    counts = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            word, _, count = line.partition("\t")
            counts[word] = counts.get(word, 0) + int(count)
    return counts


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", help="word<TAB>count frequency file")
    parser.add_argument("--delta", type=float, default=0.5)
    parser.add_argument(
        "--fault",
        choices=["wrong-id", "wrong-count", "non-finite", "garbage", "silent"],
        help="deliberately violate the protocol",
    )
    args = parser.parse_args()

    counts = load_corpus(args.corpus) if args.corpus else {}
    total = sum(counts.values())
    denom = total + args.delta * (len(counts) + 1)

    def log_prob(word):
        return math.log((counts.get(word, 0) + args.delta) / denom)

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        scores = [
            sum(log_prob(w) for w in text.split(" "))
            for text in request["texts"]
        ]
        response = {"id": request["id"], "scores": scores}

        if args.fault == "wrong-id":
            response["id"] = request["id"] + 1
        elif args.fault == "wrong-count":
            response["scores"] = scores[:-1] if scores else [0.0]
        elif args.fault == "non-finite":
            # JSON has no NaN/inf literal; conforming encoders emit null.
            response["scores"] = [None] + scores[1:]
        elif args.fault == "garbage":
            print("this is not json", flush=True)
            continue
        elif args.fault == "silent":
            continue

        print(json.dumps(response), flush=True)


if __name__ == "__main__":
    main()
