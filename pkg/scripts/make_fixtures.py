"""Regenerate the bundled benchmark fixtures under src/foiltree/fixtures/.

The iris file is the classic 150-flower measurement table (via scikit-learn).
The diabetes and heart files are seeded synthetic stand-ins that keep the
canonical shapes of the UCI originals (768 x 8; 303 x 13 with six incomplete
rows) and comparable class structure, so the repository runs fully offline.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.datasets import load_iris

OUT = Path(__file__).resolve().parents[1] / "src" / "foiltree" / "fixtures"


def write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)] + [",".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(rows)} rows)")


def make_iris() -> None:
    iris = load_iris()
    header = [
        "sepal length (cm)",
        "sepal width (cm)",
        "petal length (cm)",
        "petal width (cm)",
        "species",
    ]
    names = [str(n) for n in iris.target_names]
    rows = [
        [f"{v:.1f}" for v in x] + [names[t]]
        for x, t in zip(iris.data, iris.target)
    ]
    write_csv(OUT / "iris.csv", header, rows)


def make_diabetes(seed: int = 20240817) -> None:
    """768 instances, 8 features, outcomes 500 negative / 268 positive."""
    rng = np.random.default_rng(seed)
    n_neg, n_pos = 500, 268
    y = np.array([0] * n_neg + [1] * n_pos)

    def cond(neg_draw, pos_draw):
        return np.concatenate([neg_draw(n_neg), pos_draw(n_pos)])

    pregnancies = cond(
        lambda n: rng.poisson(2.8, n),
        lambda n: rng.poisson(4.6, n),
    ).clip(0, 17)
    glucose = cond(
        lambda n: rng.normal(107.0, 21.0, n),
        lambda n: rng.normal(146.0, 27.0, n),
    ).clip(56, 199)
    blood_pressure = cond(
        lambda n: rng.normal(70.0, 11.0, n),
        lambda n: rng.normal(75.0, 12.0, n),
    ).clip(38, 114)
    skin = cond(
        lambda n: rng.normal(26.0, 9.5, n),
        lambda n: rng.normal(32.0, 9.5, n),
    ).clip(7, 63)
    # zero-inflation mimics the original file's unrecorded measurements
    skin[rng.random(768) < 0.28] = 0
    insulin = cond(
        lambda n: rng.lognormal(4.55, 0.55, n),
        lambda n: rng.lognormal(5.05, 0.55, n),
    ).clip(15, 846)
    insulin[rng.random(768) < 0.46] = 0
    bmi = cond(
        lambda n: rng.normal(30.6, 6.3, n),
        lambda n: rng.normal(35.6, 6.5, n),
    ).clip(18.2, 67.1)
    pedigree = cond(
        lambda n: rng.lognormal(-1.05, 0.55, n),
        lambda n: rng.lognormal(-0.78, 0.55, n),
    ).clip(0.078, 2.42)
    age = cond(
        lambda n: 21 + rng.gamma(2.0, 4.5, n),
        lambda n: 21 + rng.gamma(3.1, 5.2, n),
    ).clip(21, 81)

    header = [
        "pregnancies", "glucose", "blood pressure", "skin thickness",
        "insulin", "bmi", "diabetes pedigree", "age", "outcome",
    ]
    order = rng.permutation(768)
    rows = []
    for i in order:
        rows.append([
            str(int(pregnancies[i])),
            str(int(round(glucose[i]))),
            str(int(round(blood_pressure[i]))),
            str(int(round(skin[i]))),
            str(int(round(insulin[i]))),
            f"{bmi[i]:.1f}",
            f"{pedigree[i]:.3f}",
            str(int(round(age[i]))),
            str(int(y[i])),
        ])
    write_csv(OUT / "diabetes.csv", header, rows)


def make_heart(seed: int = 20240818) -> None:
    """303 instances, 13 features, disease severity 0-4; six rows carry '?'."""
    rng = np.random.default_rng(seed)
    severities = np.array([0] * 164 + [1] * 55 + [2] * 36 + [3] * 35 + [4] * 13)
    present = (severities > 0).astype(int)
    n = len(severities)
    sev_scale = severities / 4.0  # pushes the sicker grades further out

    def choice(p_no, p_yes, values):
        out = np.empty(n)
        for i in range(n):
            p = p_yes if present[i] else p_no
            out[i] = rng.choice(values, p=p)
        return out

    age = np.where(present, rng.normal(56.0, 7.8, n), rng.normal(52.0, 9.4, n)).clip(29, 77)
    sex = (rng.random(n) < np.where(present, 0.83, 0.56)).astype(int)
    cp = choice([0.07, 0.28, 0.40, 0.25], [0.04, 0.09, 0.12, 0.75], [1, 2, 3, 4])
    trestbps = rng.normal(129.0 + 8.0 * sev_scale, 16.5, n).clip(94, 200)
    chol = rng.normal(243.0 + 8.0 * sev_scale, 48.0, n).clip(126, 564)
    fbs = (rng.random(n) < np.where(present, 0.16, 0.13)).astype(int)
    restecg = choice([0.60, 0.02, 0.38], [0.43, 0.05, 0.52], [0, 1, 2])
    thalach = rng.normal(158.5 - 22.0 * sev_scale - 6.0 * present, 17.5, n).clip(71, 202)
    exang = (rng.random(n) < np.where(present, 0.55, 0.14)).astype(int)
    oldpeak = (rng.gamma(1.25, np.where(present, 1.15, 0.45), n) * (1 + 0.5 * sev_scale)).clip(0, 6.2)
    slope = choice([0.63, 0.31, 0.06], [0.22, 0.66, 0.12], [1, 2, 3])
    ca = choice([0.74, 0.17, 0.06, 0.03], [0.30, 0.31, 0.23, 0.16], [0, 1, 2, 3])
    thal = choice([0.79, 0.07, 0.14], [0.31, 0.11, 0.58], [3, 6, 7])

    header = [
        "age", "sex", "chest pain type", "resting blood pressure",
        "serum cholesterol", "fasting blood sugar > 120", "resting ecg",
        "max heart rate", "exercise induced angina", "st depression",
        "st slope", "major vessels colored", "thalassemia", "num",
    ]
    order = rng.permutation(n)
    rows = []
    for i in order:
        rows.append([
            str(int(round(age[i]))),
            str(int(sex[i])),
            str(int(cp[i])),
            str(int(round(trestbps[i]))),
            str(int(round(chol[i]))),
            str(int(fbs[i])),
            str(int(restecg[i])),
            str(int(round(thalach[i]))),
            str(int(exang[i])),
            f"{oldpeak[i]:.1f}",
            str(int(slope[i])),
            str(int(ca[i])),
            str(int(thal[i])),
            str(int(severities[i])),
        ])
    # six incomplete rows, mirroring the original file: four '?' in the
    # vessel count column, two in the thalassemia column
    blank = rng.choice(n, size=6, replace=False)
    for j, i in enumerate(blank):
        rows[i][11 if j < 4 else 12] = "?"
    write_csv(OUT / "heart.csv", header, rows)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    make_iris()
    make_diabetes()
    make_heart()
