#!/usr/bin/env python3
"""Regenerate the binarized benchmark CSVs under data/.

monk1.csv    MONK-1 rule ((a1 == a2) or (a5 == 1)) on a seeded 124-row sample
             of the 432 attribute combinations, dummy-coded (last level
             dropped) into 11 binary features.
iris.csv     scikit-learn's Iris, each measurement cut into three equal-count
             bins (pandas.qcut) and one-hot coded: 12 binary features.
compas200.csv  Synthetic stand-in with the 12 binary COMPAS indicators used in
             the sparse-tree literature; labels drawn from a fixed logistic
             model. Not the real COMPAS data.
"""
import itertools
import pathlib

import numpy as np
import pandas as pd
from sklearn.datasets import load_iris

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def monk1(rng):
    levels = [3, 3, 2, 3, 4, 2]
    rows = list(itertools.product(*[range(1, k + 1) for k in levels]))
    pick = sorted(rng.choice(len(rows), size=124, replace=False))
    recs = []
    for i in pick:
        a = rows[i]
        feats = {}
        for j, k in enumerate(levels):
            for v in range(1, k):
                feats[f"a{j + 1}_{v}"] = int(a[j] == v)
        feats["label"] = int(a[0] == a[1] or a[4] == 1)
        recs.append(feats)
    return pd.DataFrame(recs)


def iris():
    raw = load_iris(as_frame=True)
    df = raw.frame
    out = pd.DataFrame()
    for col in raw.feature_names:
        bins = pd.qcut(df[col], 3, labels=["low", "mid", "high"])
        name = col.replace(" (cm)", "").replace(" ", "_")
        for b in ["low", "mid", "high"]:
            out[f"{name}={b}"] = (bins == b).astype(int)
    out["label"] = df["target"].astype(int)
    return out


def compas200(rng):
    n = 200
    female = rng.random(n) < 0.19
    age = rng.integers(18, 70, size=n)
    juv_fel = rng.random(n) < 0.07
    juv_misd = rng.random(n) < 0.10
    priors = rng.choice([0, 1, 2, 3, 4, 6, 9], size=n, p=[0.33, 0.17, 0.12, 0.09, 0.11, 0.10, 0.08])
    df = pd.DataFrame({
        "sex=Female": female.astype(int),
        "age<21": (age < 21).astype(int),
        "age<23": (age < 23).astype(int),
        "age<26": (age < 26).astype(int),
        "age<46": (age < 46).astype(int),
        "juvenile_felonies=0": (~juv_fel).astype(int),
        "juvenile_misdemeanors=0": (~juv_misd).astype(int),
        "juvenile_crimes=0": (~(juv_fel | juv_misd)).astype(int),
        "priors=0": (priors == 0).astype(int),
        "priors=1": (priors == 1).astype(int),
        "priors=2-3": ((priors >= 2) & (priors <= 3)).astype(int),
        "priors>3": (priors > 3).astype(int),
    })
    logit = (-0.6 - 0.5 * female + 0.9 * (age < 23) + 0.5 * (age < 26) - 0.4 * (age >= 46)
             + 0.7 * juv_fel + 0.3 * juv_misd + 0.5 * (priors >= 2) + 0.8 * (priors > 3))
    p = 1.0 / (1.0 + np.exp(-logit))
    df["label"] = (rng.random(n) < p).astype(int)
    return df


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(20240601)
    monk1(rng).to_csv(OUT / "monk1.csv", index=False)
    iris().to_csv(OUT / "iris.csv", index=False)
    compas200(np.random.default_rng(7)).to_csv(OUT / "compas200.csv", index=False)


if __name__ == "__main__":
    main()
