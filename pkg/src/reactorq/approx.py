"""Standardized degree-2 polynomial ridge regression.

Used both for the Q-function (over state-action inputs) and the policy
function (over state inputs). Inputs are standardized, expanded into the
full quadratic monomial basis [1, x_i, x_i*x_j], and fitted by closed-form
normal equations with an unpenalized bias.
"""

import warnings
from dataclasses import dataclass

import numpy as np

STD_FLOOR = 1e-12
DEFAULT_LAMBDA = 1e-3


@dataclass
class Scaler:
    means: np.ndarray
    stds: np.ndarray

    def transform(self, X):
        return (X - self.means) / self.stds


def fit_scaler(X) -> Scaler:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds = np.maximum(stds, STD_FLOOR)
    return Scaler(means=means, stds=stds)


def n_poly2_features(d: int) -> int:
    return 1 + d + d * (d + 1) // 2


def poly2_features(X):
    """Quadratic monomial basis, row-wise: [1, x_1..x_d, x_i*x_j for i<=j]."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, d = X.shape
    cols = [np.ones(n)]
    cols.extend(X[:, i] for i in range(d))
    for i in range(d):
        for j in range(i, d):
            cols.append(X[:, i] * X[:, j])
    return np.column_stack(cols)


@dataclass
class PolyRidgeModel:
    scaler: Scaler
    weights: np.ndarray
    lam: float

    @property
    def input_dim(self):
        return len(self.scaler.means)

    def predict_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.input_dim:
            raise ValueError(
                f"expected {self.input_dim} input columns, got {X.shape[1]}")
        return poly2_features(self.scaler.transform(X)) @ self.weights

    def predict(self, x):
        return float(self.predict_batch(np.asarray(x, dtype=float)[None, :])[0])


def ridge_fit(X, y, lam=DEFAULT_LAMBDA) -> PolyRidgeModel:
    """Fit y ~ degree-2 polynomial of standardized X; bias unpenalized."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    scaler = fit_scaler(X)
    phi = poly2_features(scaler.transform(X))
    n_feat = phi.shape[1]
    penalty = np.eye(n_feat)
    penalty[0, 0] = 0.0
    gram = phi.T @ phi + lam * penalty
    rhs = phi.T @ y
    try:
        weights = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        warnings.warn("singular normal matrix; refitting with lambda=1e-10",
                      stacklevel=2)
        weights = np.linalg.solve(gram + 1e-10 * penalty, rhs)
    return PolyRidgeModel(scaler=scaler, weights=weights, lam=float(lam))


def write_model_block(model: PolyRidgeModel, fh):
    """Flat text persistence: lambda, scaler rows, then ordered weights."""
    fh.write("polyridge v1\n")
    fh.write(f"lambda {model.lam!r}\n")
    fh.write("means " + " ".join(repr(float(v)) for v in model.scaler.means) + "\n")
    fh.write("stds " + " ".join(repr(float(v)) for v in model.scaler.stds) + "\n")
    fh.write("weights " + " ".join(repr(float(v)) for v in model.weights) + "\n")


def read_model_block(fh) -> PolyRidgeModel:
    header = fh.readline().strip()
    if header != "polyridge v1":
        raise ValueError(f"unrecognized model block header {header!r}")
    fields = {}
    for _ in range(4):
        key, _, rest = fh.readline().partition(" ")
        fields[key.strip()] = np.array([float(v) for v in rest.split()])
    scaler = Scaler(means=fields["means"], stds=fields["stds"])
    return PolyRidgeModel(scaler=scaler, weights=fields["weights"],
                          lam=float(fields["lambda"][0]))


def save_model(model: PolyRidgeModel, path):
    with open(path, "w") as fh:
        write_model_block(model, fh)


def load_model(path) -> PolyRidgeModel:
    with open(path) as fh:
        return read_model_block(fh)
