#!/usr/bin/env python3
"""Rebuild the CSV files under data/ from their upstream archives.

Not needed at runtime; the CSVs are committed. Inputs:

  --orange    Orange 2.5a1 source archive (Orange-2.5a1.tar.gz), which ships
              voting, iris, car and heart_disease as .tab files
  --pydataset pydataset 0.2.0 source archive, which ships MASS::biopsy
              (the 699-row Wisconsin breast cancer data)

    pip download --no-deps --no-binary :all: pydataset==0.2.0
    python scripts/fetch_datasets.py --orange Orange-2.5a1.tar.gz \
        --pydataset pydataset-0.2.0.tar.gz
"""

import argparse
import csv
import io
import tarfile
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"


def member(archive, suffix):
    with tarfile.open(archive) as tar:
        for m in tar.getmembers():
            if m.name.endswith(suffix):
                return tar.extractfile(m).read().decode("latin-1")
    raise SystemExit(f"{archive}: no member ending in {suffix}")


def tab(archive, name):
    lines = member(archive, f"doc/datasets/{name}").splitlines()
    rows = [line.split("\t") for line in lines]
    return rows[0], rows[3:]


def write(name, header, rows):
    with open(OUT / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(name, len(rows))


def voting(orange):
    h, r = tab(orange, "voting.tab")
    rows = [[x[0]] + [v if v else "?" for v in x[1:]] for x in r if len(x) > 1]
    write("voting.csv", ["class"] + h[1:], rows)


def iris(orange):
    _, r = tab(orange, "iris.tab")
    header = ["sepal_length", "sepal_width", "petal_length", "petal_width", "class"]
    write("iris.csv", header, [x for x in r if len(x) == 5])


def car(orange):
    _, r = tab(orange, "car.tab")
    header = ["buying", "maint", "doors", "persons", "lug_boot", "safety", "class"]
    write("car.csv", header, [x for x in r if len(x) == 7])


def heart(orange):
    """Recode the nominal columns to the numeric codes of the UCI file."""
    _, r = tab(orange, "heart_disease.tab")
    sex = {"male": "1", "female": "0"}
    cp = {"typical ang": "1", "atypical ang": "2", "non-anginal": "3", "asymptomatic": "4"}
    ecg = {"normal": "0", "ST-T abnormal": "1", "left vent hypertrophy": "2"}
    slope = {"upsloping": "1", "flat": "2", "downsloping": "3"}
    thal = {"normal": "3", "fixed defect": "6", "reversable defect": "7", "?": "?"}
    rows = []
    for x in r:
        if len(x) != 14:
            continue
        rows.append([
            x[0], sex[x[1]], cp[x[2]], x[3], x[4], x[5], ecg[x[6]], x[7], x[8],
            x[9], slope[x[10]], x[11] or "?", thal[x[12] or "?"], x[13],
        ])
    header = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
              "exang", "oldpeak", "slope", "ca", "thal", "num"]
    write("heart_cleveland.csv", header, rows)


def breast_cancer(pydataset):
    text = member(pydataset, "rdata/csv/MASS/biopsy.csv")
    rows = []
    for x in list(csv.reader(io.StringIO(text)))[1:]:
        cells = ["?" if v == "NA" else v for v in x[2:11]]
        rows.append([x[1]] + cells + ["2" if x[11] == "benign" else "4"])
    header = ["id", "clump_thickness", "uniformity_cell_size", "uniformity_cell_shape",
              "marginal_adhesion", "single_epithelial_cell_size", "bare_nuclei",
              "bland_chromatin", "normal_nucleoli", "mitoses", "class"]
    write("breast_cancer_wisconsin.csv", header, rows)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--orange", type=Path, required=True)
    p.add_argument("--pydataset", type=Path, required=True)
    args = p.parse_args()
    OUT.mkdir(exist_ok=True)
    for build in (voting, iris, car, heart):
        build(args.orange)
    breast_cancer(args.pydataset)


if __name__ == "__main__":
    main()
