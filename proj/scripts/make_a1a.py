#!/usr/bin/env python3
# Copyright 2026 The HedgeClipper Authors.
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

"""Rebuilds the LibSVM a1a / a1a.t pair from the raw UCI Adult training file.

The binarization follows the usual 123-feature encoding: the six continuous
attributes are cut into quintiles (capital-gain and capital-loss into
zero / nonzero), and the eight categorical attributes are one-hot encoded in
the attribute order of adult.names. Missing values ('?') activate no feature.
The first 1605 rows form a1a and the remaining 30956 rows form a1a.t.

Usage: make_a1a.py adult.data OUTDIR
"""

import bisect
import os
import sys

WORKCLASS = ["Private", "Self-emp-not-inc", "Self-emp-inc", "Federal-gov",
             "Local-gov", "State-gov", "Without-pay", "Never-worked"]
EDUCATION = ["Bachelors", "Some-college", "11th", "HS-grad", "Prof-school",
             "Assoc-acdm", "Assoc-voc", "9th", "7th-8th", "12th", "Masters",
             "1st-4th", "10th", "Doctorate", "5th-6th", "Preschool"]
MARITAL = ["Married-civ-spouse", "Divorced", "Never-married", "Separated",
           "Widowed", "Married-spouse-absent", "Married-AF-spouse"]
OCCUPATION = ["Tech-support", "Craft-repair", "Other-service", "Sales",
              "Exec-managerial", "Prof-specialty", "Handlers-cleaners",
              "Machine-op-inspct", "Adm-clerical", "Farming-fishing",
              "Transport-moving", "Priv-house-serv", "Protective-serv",
              "Armed-Forces"]
RELATIONSHIP = ["Wife", "Own-child", "Husband", "Not-in-family",
                "Other-relative", "Unmarried"]
RACE = ["White", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other", "Black"]
SEX = ["Female", "Male"]
COUNTRY = ["United-States", "Cambodia", "England", "Puerto-Rico", "Canada",
           "Germany", "Outlying-US(Guam-USVI-etc)", "India", "Japan", "Greece",
           "South", "China", "Cuba", "Iran", "Honduras", "Philippines", "Italy",
           "Poland", "Jamaica", "Vietnam", "Mexico", "Portugal", "Ireland",
           "France", "Dominican-Republic", "Laos", "Ecuador", "Taiwan", "Haiti",
           "Columbia", "Hungary", "Guatemala", "Nicaragua", "Scotland",
           "Thailand", "Yugoslavia", "El-Salvador", "Trinadad&Tobago", "Peru",
           "Hong", "Holand-Netherlands"]

# (column, kind, payload): kind "q" = quintiles, "z" = zero/nonzero,
# "c" = categorical with the listed vocabulary.
LAYOUT = [
    (0, "q", 5), (1, "c", WORKCLASS), (2, "q", 5), (3, "c", EDUCATION),
    (4, "q", 5), (5, "c", MARITAL), (6, "c", OCCUPATION), (7, "c", RELATIONSHIP),
    (8, "c", RACE), (9, "c", SEX), (10, "z", 2), (11, "z", 2), (12, "q", 5),
    (13, "c", COUNTRY),
]

A1A_SIZE = 1605


def read_rows(path):
    rows = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            fields = [t.strip() for t in line.split(",")]
            if len(fields) != 15:
                raise ValueError("bad row: %r" % line)
            rows.append(fields)
    return rows


def quintile_edges(values):
    s = sorted(values)
    return [s[(k * len(s)) // 5] for k in range(1, 5)]


def encode(rows):
    edges = {}
    for col, kind, _ in LAYOUT:
        if kind == "q":
            edges[col] = quintile_edges([float(r[col]) for r in rows])
    out = []
    for r in rows:
        base = 1
        feats = []
        for col, kind, payload in LAYOUT:
            v = r[col]
            if kind == "q":
                feats.append(base + bisect.bisect_right(edges[col], float(v)))
                base += payload
            elif kind == "z":
                feats.append(base + (0 if float(v) == 0 else 1))
                base += payload
            else:
                if v in payload:
                    feats.append(base + payload.index(v))
                elif v != "?":
                    raise ValueError("unknown category %r in column %d" % (v, col))
                base += len(payload)
        assert base == 124
        label = "+1" if r[14].startswith(">50K") else "-1"
        out.append(label + "".join(" %d:1" % f for f in sorted(feats)))
    return out


def main(argv):
    if len(argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    lines = encode(read_rows(argv[1]))
    with open(os.path.join(argv[2], "a1a"), "w") as f:
        f.write("\n".join(lines[:A1A_SIZE]) + "\n")
    with open(os.path.join(argv[2], "a1a.t"), "w") as f:
        f.write("\n".join(lines[A1A_SIZE:]) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
