"""Built-in inputs reproducing the worked examples."""

from __future__ import annotations

SURFACES = {
    # w = conj(z)^3
    "zbar3": {"k": 3, "coefficients": [{"j": 3, "re": 1.0, "im": 0.0}], "residual": [], "radius": 1.0},
    # w = conj(z)^4 + 0.3 z conj(z)^3
    "tilted-zbar4": {
        "k": 4,
        "coefficients": [{"j": 4, "re": 1.0, "im": 0.0}, {"j": 3, "re": 0.3, "im": 0.0}],
        "residual": [],
        "radius": 1.0,
    },
    # w = conj(z)^3 + 0.9 z conj(z)^2, fails at every M
    "zbar3-fail": {
        "k": 3,
        "coefficients": [{"j": 3, "re": 1.0, "im": 0.0}, {"j": 2, "re": 0.9, "im": 0.0}],
        "residual": [],
        "radius": 1.0,
    },
    # w = (1+i) z^3 + 0.1 z conj(z)^2 + conj(z)^3
    "holomorphic-lead": {
        "k": 3,
        "coefficients": [
            {"j": 0, "re": 1.0, "im": 1.0},
            {"j": 2, "re": 0.1, "im": 0.0},
            {"j": 3, "re": 1.0, "im": 0.0},
        ],
        "residual": [],
        "radius": 1.0,
    },
    # w = conj(z)^3 + z^2 conj(z)^2: validity radius about 0.95
    "zbar3-residual": {
        "k": 3,
        "coefficients": [{"j": 3, "re": 1.0, "im": 0.0}],
        "residual": [{"a": 2, "b": 2, "re": 1.0, "im": 0.0}],
        "radius": 1.0,
    },
}

FUNCTIONS = {
    # F = conj(z): the Weierstrass case
    "conj": {"function": [{"a": 0, "b": 1, "re": 1.0, "im": 0.0}], "radius": 1.0, "probe": [0, 0, 0.5, 0]},
    # F = conj(z) + 0.5 z
    "shear": {
        "function": [{"a": 0, "b": 1, "re": 1.0, "im": 0.0}, {"a": 1, "b": 0, "re": 0.5, "im": 0.0}],
        "radius": 1.0,
    },
    # F = |z|^2: elliptic control, fibres are circles and (0, 1/4) lies in the hull
    "elliptic": {
        "function": [{"a": 1, "b": 1, "re": 1.0, "im": 0.0}],
        "radius": 1.0,
        "exclude": [[0.0, 0.0]],
        "probe": [0, 0, 0.25, 0],
        "target": [{"a": 0, "b": 1, "re": 1.0, "im": 0.0}],
    },
    # algebra generated by z and conj(z)^3, target conj(z)
    "zbar3-algebra": {
        "function": [{"a": 0, "b": 3, "re": 1.0, "im": 0.0}],
        "radius": 1.0,
        "target": [{"a": 0, "b": 1, "re": 1.0, "im": 0.0}],
        "schedule": [[1, 1], [2, 2], [3, 3], [4, 4], [5, 5], [6, 6]],
    },
}

ALL = {**SURFACES, **FUNCTIONS}
