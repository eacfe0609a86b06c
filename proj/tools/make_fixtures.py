#!/usr/bin/env python3
# Copyright 2026 The lenctl Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Regenerates the synthetic test fixtures under tests/fixtures.

Output is deterministic; rerunning must leave the committed files unchanged.

  python3 tools/make_fixtures.py tests/fixtures
"""

import argparse
import json
import pathlib
import random

SHORT_VOCAB = ("a the cat dog sat ran on mat red blue big small fast slow "
               "and of to in it is was").split()

DIALOG_WORDS = (
    "i you we they it this that what where when how why yes no sure okay "
    "really maybe think know want need like love hate go come see get make "
    "take tell ask work home school dinner lunch coffee tea movie book "
    "weekend today tomorrow tonight morning time money price room ticket "
    "train bus taxi friend mother father doctor teacher manager sorry please "
    "thanks great good bad fine nice busy tired happy late early again here "
    "there would could should will can have has do does did not very just"
).split()

OPENERS = ["Excuse me,", "Hi,", "Well,", "Oh,", "Sorry,", "Listen,", "So,"]
ENDINGS = [".", ".", ".", "?", "!"]


def rouge_texts(rng, count=200, max_words=10):
    texts = []
    for _ in range(count):
        n = rng.randint(1, max_words)
        texts.append(" ".join(rng.choice(SHORT_VOCAB) for _ in range(n)))
    return texts


def utterance(rng, length):
    words = [rng.choice(DIALOG_WORDS) for _ in range(length)]
    if length > 2 and rng.random() < 0.3:
        words[0] = rng.choice(OPENERS)
    words[0] = words[0][0].upper() + words[0][1:]
    return " ".join(words) + rng.choice(ENDINGS)


def turn_length(rng):
    # Long right tail, floor of 1 word.
    return max(1, min(179, int(rng.lognormvariate(2.2, 0.65))))


def dialog_records(rng, count=6205):
    records = []
    for i in range(count):
        history = [utterance(rng, turn_length(rng))
                   for _ in range(rng.randint(1, 3))]
        source = "\n".join(("A: " if k % 2 == 0 else "B: ") + h
                           for k, h in enumerate(history))
        records.append({
            "id": f"dd-{i:05d}",
            "source": source,
            "reference": utterance(rng, turn_length(rng)),
            "task": "dialogue",
        })
    return records


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("out_dir", type=pathlib.Path)
    parser.add_argument("--seed", type=int, default=20260501)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(args.seed)
    (args.out_dir / "rouge_texts.txt").write_text(
        "\n".join(rouge_texts(rng)) + "\n", encoding="utf-8")
    with open(args.out_dir / "dialog_format.jsonl", "w", encoding="utf-8") as f:
        for rec in dialog_records(rng):
            f.write(json.dumps(rec, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
