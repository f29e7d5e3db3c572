"""Synthetic stand-in cohort for the bundled matching + sensitivity example.

54 treated units and 160 controls. `maltreated` is the binary covariate used
as the interaction covariate; treatment probability rises with it and the
binary outcome carries a modest treatment effect.

    python3 data/generate_synthetic.py > data/synthetic_cohort.csv
"""
import csv
import sys

import numpy as np

SEED = 20240611
N_TREATED = 54
N_CONTROL = 160


def draw(rng, n, treated):
    shift = 0.4 if treated else 0.0
    age = np.round(rng.normal(53 + 2 * shift, 4, n), 1)
    education = rng.integers(10, 19, n) + (rng.random(n) < shift / 2)
    bmi = np.round(rng.normal(27 + shift, 4, n), 1)
    maltreated = (rng.random(n) < (0.35 if treated else 0.25)).astype(int)
    logit = -1.4 + 0.9 * maltreated + 0.03 * (bmi - 27) + (1.1 if treated else 0.0)
    outcome = (rng.random(n) < 1 / (1 + np.exp(-logit))).astype(int)
    return age, education, bmi, maltreated, outcome


def main():
    rng = np.random.default_rng(SEED)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["unit_id", "treated", "outcome", "age", "education", "bmi", "maltreated"])
    uid = 1
    for treated, n in ((1, N_TREATED), (0, N_CONTROL)):
        age, edu, bmi, mal, y = draw(rng, n, treated == 1)
        for k in range(n):
            w.writerow([f"u{uid:03d}", treated, y[k], age[k], int(edu[k]), bmi[k], mal[k]])
            uid += 1


if __name__ == "__main__":
    main()
