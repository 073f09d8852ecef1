#!/usr/bin/env python3
"""Writes the scenario suite under fixtures/suite in canonical form.

Inputs are built from integer polynomials; expected values come from
closed-form reasoning about each input, never from running the tool.
"""

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "suite"
N, D = 16, 24


class Poly:
    """Integer polynomial in d variables truncated at total degree D."""

    def __init__(self, d, terms=None, deg=D):
        self.d, self.deg = d, deg
        self.t = {e: c for e, c in (terms or {}).items() if c != 0 and sum(e) <= deg}

    @staticmethod
    def const(d, c, deg=D):
        return Poly(d, {(0,) * d: c}, deg)

    @staticmethod
    def var(d, i, deg=D):
        e = [0] * d
        e[i] = 1
        return Poly(d, {tuple(e): 1}, deg)

    def __add__(self, o):
        o = self._lift(o)
        t = dict(self.t)
        for e, c in o.t.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.d, t, self.deg)

    def __sub__(self, o):
        return self + self._lift(o) * -1

    def __mul__(self, o):
        o = self._lift(o)
        t = {}
        for e1, c1 in self.t.items():
            for e2, c2 in o.t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) <= self.deg:
                    t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.d, t, self.deg)

    __rmul__ = __mul__
    __radd__ = __add__

    def _lift(self, o):
        return o if isinstance(o, Poly) else Poly.const(self.d, o, self.deg)


def inverse_sigma(d, i, deg=D):
    """(1 + t_i)^{-1} expanded to degree deg."""
    t = {}
    for k in range(deg + 1):
        e = [0] * d
        e[i] = k
        t[tuple(e)] = (-1) ** k
    return Poly(d, t, deg)


def scalar(p, n, c, level=0):
    return {"p": p, "N": n, "level": level, "coeffs": [str(c % p**n)]}


def series(f, p, n=N, k=0, level=0):
    mod = p**n
    terms = [{"exp": list(e), "coeff": scalar(p, n, c)} for e, c in sorted(f.t.items()) if c % mod]
    return {"ring": {"p": p, "N": n, "d": f.d, "D": f.deg, "level": level}, "denom_exp": k, "terms": terms}


def rootwise_pair(p):
    t0, t1 = Poly.var(2, 0), Poly.var(2, 1)
    f = t1 * t1 + p**3 * t0 * t1 + p**3 * (t0 + p)
    g = t1 * t1 + p**3 * (t0 + p)
    return f, g


def scenarios():
    s = {}
    t0 = Poly.var(1, 0)

    for p in (3, 5):
        f, g = rootwise_pair(p)
        s[f"root-lemma/rootwise_p{p}.json"] = {
            "kind": "root-lemma",
            "description": "per-root equality without two-variable equality",
            "input": {"f": series(f, p), "g": series(g, p), "levels": [1, 2, 3]},
            "expect": {
                "associates": False,
                "hypothesis_ok": False,
                "per_zeta": [{"level": k, "equal": True} for k in (1, 2, 3)],
            },
        }
        s[f"mu/rootwise_f_p{p}.json"] = {"kind": "mu", "input": series(f, p), "expect": {"mu": "0"}}
        s[f"mu/rootwise_f_restricted_p{p}.json"] = {
            "kind": "mu",
            "input": series(Poly(2, {e: c for e, c in f.t.items() if e[1] == 0}), p),
            "expect": {"mu": "3"},
        }

    a0, a1 = Poly.var(2, 0, 12), Poly.var(2, 1, 12)
    g = a1 * a1 + a0 + 3
    u = 1 + 3 * a0 * a1
    s["root-lemma/unit_multiple.json"] = {
        "kind": "root-lemma",
        "input": {"f": series(u * g, 3, 12), "g": series(g, 3, 12), "levels": [1, 2, 3]},
        "expect": {"associates": True, "hypothesis_ok": True, "per_zeta": [{"level": k, "equal": True} for k in (1, 2, 3)]},
    }

    s["monsky/variable.json"] = {
        "kind": "monsky",
        "input": {"series": series(t0, 3), "max_level": 3, "threshold": "1"},
        "expect": {"count": 1, "counts": [1, 1, 1, 1]},
    }
    s["monsky/one.json"] = {
        "kind": "monsky",
        "input": {"series": series(Poly.const(1, 1), 3), "max_level": 3, "threshold": "1"},
        "expect": {"count": 0, "counts": [0, 0, 0, 0]},
    }
    # ord(zeta - 1 - p) = 1/phi(p^k) for k >= 1, and 1 + t_0 is a unit.
    s["monsky/linear_times_unit.json"] = {
        "kind": "monsky",
        "input": {"series": series((t0 - 3) * (1 + t0), 3), "max_level": 4, "threshold": "1"},
        "expect": {"count": 1, "counts": [1, 1, 1, 1, 1]},
    }
    # Level 1 has phi = 2, so ord(zeta - 1 + 3) = 1/2 for both primitive cube roots.
    s["monsky/half_threshold.json"] = {
        "kind": "monsky",
        "input": {"series": series(t0 + 3, 3), "max_level": 4, "threshold": "1/2"},
        "expect": {"count": 3, "counts": [1, 3, 3, 3, 3]},
    }

    sigma, sigma_inv = 1 + t0, inverse_sigma(1, 0)
    s["fe-check/symmetric.json"] = {
        "kind": "fe-check",
        "input": series(sigma + sigma_inv - 2, 3),
        "expect": {"holds": True},
    }
    s["fe-check/variable.json"] = {"kind": "fe-check", "input": series(t0, 3), "expect": {"holds": True}}
    s["fe-check/shifted_variable.json"] = {
        "kind": "fe-check",
        "description": "the roots -p and p/(1-p) differ",
        "input": series(t0 + 3, 3),
        "expect": {"holds": False},
    }

    b0, b1 = Poly.var(2, 0), Poly.var(2, 1)
    s["charideal/basic.json"] = {
        "kind": "charideal",
        "input": {
            "ring": {"p": 3, "N": N, "d": 2, "D": D, "level": 0},
            "module": {"factors": [{"series": series(b0 + 3, 3), "mult": 1}], "p_part": [2]},
        },
        "expect": {"series": series(9 * b0 + 27, 3)},
    }
    s["charideal/empty.json"] = {
        "kind": "charideal",
        "input": {"ring": {"p": 3, "N": N, "d": 2, "D": D, "level": 0}, "module": {}},
        "expect": {"series": series(Poly.const(2, 1), 3)},
    }
    zero = series(Poly(2), 3)
    zero["zero_ideal"] = True
    s["charideal/non_torsion.json"] = {
        "kind": "charideal",
        "input": {"ring": {"p": 3, "N": N, "d": 2, "D": D, "level": 0}, "module": {"non_torsion": True}},
        "expect": {"series": zero},
    }

    s["sharp/variable.json"] = {"kind": "sharp", "input": series(t0, 5), "expect": {"series": series(sigma_inv - 1, 5)}}
    s["twist/trivial.json"] = {
        "kind": "twist",
        "input": {"series": series(b0 * b1 + 3, 3), "character": {"level": 0, "images": [0, 0]}},
        "expect": {"series": series(b0 * b1 + 3, 3)},
    }
    s["specialize/projection.json"] = {
        "kind": "specialize",
        "input": {"series": series(b0 * b1 + b0 + 3, 3), "map": {"M": [[1, 0]], "source": 2}},
        "expect": {"series": series(t0 + 3, 3)},
    }
    s["norm/whole_group.json"] = {
        "kind": "norm",
        "input": {"series": series(b0 + b1 * b1 + 3, 3), "subgroup": {"H": [[1, 0], [0, 1]]}},
        "expect": {"series": series(b0 + b1 * b1 + 3, 3)},
    }
    s["prepare/linear.json"] = {
        "kind": "prepare",
        "input": series(t0 + 3, 3),
        "expect": {"mu": "0", "poly": {"var": 0, "lambda": 1}},
    }
    s["divisibility/constructed.json"] = {
        "kind": "divisibility",
        "input": {"series": series(b0 * (b1 + 3), 3), "forms": [[1, 0]]},
        "expect": {"divisible": True},
    }
    s["divisibility/one.json"] = {
        "kind": "divisibility",
        "input": {"series": series(Poly.const(2, 1), 3), "forms": [[1, 0]]},
        "expect": {"divisible": False},
    }

    tower = {"p": 3, "N": N, "D": D, "d": 2, "unramified": 0, "contains_unramified": True, "q": 3, "torsion_order": 1}
    place = {"id": "v", "q": 3, "reduction": "nonsplit-mult", "m": 3, "frobenius": [1, 0], "inertia": []}
    s["theta/unramified_kernel.json"] = {
        "kind": "theta",
        "description": "an unramified place whose decomposition group dies in the quotient gives (m_v)",
        "input": {"tower": tower, "places": [place], "target": {"M": [[0, 1]], "source": 2}},
        "expect": {"series": series(Poly.const(1, 3), 3)},
    }
    s["dagger/unramified_inside.json"] = {
        "kind": "dagger",
        "input": {"tower": tower, "places": [place]},
        "expect": {"series": series(Poly.const(2, 1), 3)},
    }
    # P(T) = 1 + T gives 1 + 3^{-1} sigma^{-1} = 3^{-1} (3 + sigma^{-1}).
    s["cchi/linear.json"] = {
        "kind": "cchi",
        "input": {
            "lpoly": {"coeffs": [scalar(3, N, 1), scalar(3, N, 1)]},
            "q": 3,
            "ring": {"p": 3, "N": N, "d": 1, "D": D, "level": 0},
        },
        "expect": {"series": series(3 + sigma_inv, 3, k=1)},
    }
    s["shape-check/trivial_tower.json"] = {
        "kind": "shape-check",
        "input": {
            "module": {"factors": [{"series": series(b0 + b1 * b1 + 3, 3), "mult": 1}]},
            "target_module": {"factors": [{"series": series(b0 + b1 * b1 + 3, 3), "mult": 1}]},
            "tower": dict(tower, contains_unramified=False),
            "places": [],
            "target": {"M": [[1, 0], [0, 1]], "source": 2},
        },
        "expect": {"holds": True},
    }

    s["moduli/member.json"] = {
        "kind": "moduli-member",
        "input": {"pair": {"q": 5, "n": 1, "g2": [1, 0, 1], "g3": [2]}},
        "expect": {"member": True},
    }
    s["moduli/classify_disjoint.json"] = {
        "kind": "moduli-classify",
        "description": "g2 and g3 share no zero, so no fiber is additive",
        "input": {"pair": {"q": 7, "n": 1, "g2": [6, 0, 0, 0, 1], "g3": [1, 0, 0, 0, 0, 0, 2]}},
        "expect": {"member": True, "delta_zero": False},
    }
    s["moduli/construct.json"] = {
        "kind": "moduli-construct",
        "seed": 7,
        "input": {"q": 5, "n": 1},
        "expect": {"pair": {"q": 5, "n": 1}},
    }
    s["errors/char_too_small.json"] = {
        "kind": "moduli-member",
        "input": {"pair": {"q": 3, "n": 1, "g2": [1], "g3": [1]}},
        "expect": {"error": "CharTooSmall"},
    }
    s["errors/construct_degree.json"] = {
        "kind": "moduli-construct",
        "input": {"q": 5, "n": 0},
        "expect": {"error": "InvalidDegree"},
    }
    s["errors/missing_field.json"] = {
        "kind": "twist",
        "input": {"series": series(t0, 3)},
        "expect": {"error": "SchemaViolation"},
    }
    return s


def main():
    check = "--check" in sys.argv
    stale = []
    for rel, doc in sorted(scenarios().items()):
        path = OUT / rel
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        if check:
            if not path.exists() or path.read_text() != text:
                stale.append(rel)
            continue
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    if stale:
        print("stale fixtures: " + ", ".join(stale))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
