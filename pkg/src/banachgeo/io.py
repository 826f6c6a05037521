"""JSON serialization of spaces and operators.

Space files: {"kind": "polyhedral", "mode": "exact"|"float",
"vertices": [[...], ...]} with rationals encoded as "p/q" strings in
exact mode, or {"kind": "lp", "n": int, "p": number|"inf"}. Exact-mode
round trips are bit-exact; float vertices round-trip exactly through
repr, with dual data recomputed deterministically on load.
"""

import json
import math
from fractions import Fraction

import numpy as np

from . import rational, spaces
from .errors import BanachGeoError


def _encode_scalar(v, exact):
    if exact:
        return rational.frac_str(v) if isinstance(v, Fraction) else rational.frac_str(
            rational.to_fraction(v)
        )
    return float(v)


def space_to_dict(space):
    if space.kind == "lp":
        return {
            "kind": "lp",
            "n": space.dim,
            "p": "inf" if space.p == math.inf else space.p,
        }
    exact = space.is_exact
    return {
        "kind": "polyhedral",
        "mode": space.mode,
        "vertices": [
            [_encode_scalar(c, exact) for c in v] for v in space.vertices
        ],
    }


def space_from_dict(data):
    kind = data.get("kind")
    if kind == "lp":
        return spaces.preset_space("lp", n=int(data["n"]), p=data["p"])
    if kind == "polyhedral":
        mode = data.get("mode", "float")
        return spaces.build_polyhedral(data["vertices"], mode=mode)
    raise BanachGeoError(f"unknown space kind {kind!r}")


def operator_to_dict(op):
    return {
        "matrix": [[float(v) for v in row] for row in op.matrix],
        "domain": space_to_dict(op.domain),
        "codomain": space_to_dict(op.codomain),
    }


def operator_from_dict(data):
    from .operators import Operator

    return Operator(
        np.array(data["matrix"], dtype=np.float64),
        space_from_dict(data["domain"]),
        space_from_dict(data["codomain"]),
    )


def save_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
