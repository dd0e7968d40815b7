#!/usr/bin/env python3
"""Regenerate crates/core/data/corpus.{csv,json} from the KnotInfo/LinkInfo tables.

Usage:
    pip download database_knotinfo --no-deps -d /tmp/dk
    (unpack the wheel)
    python3 scripts/build_corpus.py /tmp/dk/database_knotinfo/csv_data

Conventions applied while transcribing:
  * HOMFLY: KnotInfo uses v^-1 P(L+) - v P(L-) = z P(L0), the same skein
    relation as the engine, so polynomials are copied after normalising the
    text form (no variable substitution).
  * Signature: KnotInfo gives sigma(positive trefoil) = -2; the corpus stores
    the opposite sign so that sigma(positive trefoil) = +2.
  * chi = 1 - 2*genus and chi4 = 1 - 2*g4 for knots.  Links only carry chi4
    where the value is elementary (unlinks, split unions of corpus knots).
  * PD codes are copied verbatim (first slot incoming under-strand, slots
    counterclockwise).
"""

import csv
import json
import re
import sys
from pathlib import Path

import sympy

v, z = sympy.symbols("v z")
ROOT = Path(__file__).resolve().parent.parent
OUT_DIR = ROOT / "crates" / "core" / "data"
SOURCE = "KnotInfo/LinkInfo (database_knotinfo 2026.10.5)"

LINKS = [
    # (LinkInfo name, corpus name, note)
    ("L2a1{0}", "L2a1{0}", "negative Hopf link"),
    ("L2a1{1}", "L2a1{1}", "positive Hopf link"),
    ("L4a1{0}", "L4a1{0}", "(2,4) torus link, antiparallel"),
    ("L4a1{1}", "L4a1{1}", "(2,4) torus link T(2,4)"),
    ("L5a1{0}", "L5a1{0}", "Whitehead link"),
    ("L6a3{0}", "L6a3{0}", "(2,6) torus link, mirror orientation"),
    ("L6a3{1}", "L6a3{1}", "(2,6) torus link, antiparallel"),
    ("L6a4{0,0}", "L6a4{0,0}", "Borromean rings"),
    ("L6a5{0,0}", "L6a5{0,0}", ""),
    ("L6n1{0,0}", "L6n1{0,0}", "(3,3) torus link, mixed orientation"),
    ("L6n1{0,1}", "L6n1{0,1}", "(3,3) torus link"),
    ("L7a1{0}", "L7a1{0}", ""),
    ("L7n1{0}", "L7n1{0}", ""),
]


def read_table(path):
    csv.field_size_limit(10**9)
    rows = list(csv.DictReader(open(path), delimiter="|"))
    return {r["name"]: r for r in rows[1:]}


def parse_poly(text):
    text = text.replace("^", "**")
    return sympy.expand(sympy.sympify(text, locals={"v": v, "z": z}))


def terms(expr):
    """Exact (v_exp, z_exp) -> int coefficient map of a Laurent polynomial."""
    expr = sympy.expand(expr)
    out = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        powers = rest.as_powers_dict()
        a = int(powers.get(v, 0))
        b = int(powers.get(z, 0))
        extra = {k: e for k, e in powers.items() if k not in (v, z) and k != 1}
        assert not extra, f"unexpected factor {extra} in {term}"
        assert coeff == int(coeff), term
        out[(a, b)] = out.get((a, b), 0) + int(coeff)
    return {k: c for k, c in out.items() if c != 0}


def fmt_mono(a, b):
    parts = []
    if a == 1:
        parts.append("v")
    elif a != 0:
        parts.append(f"v^{a}")
    if b == 1:
        parts.append("z")
    elif b != 0:
        parts.append(f"z^{b}")
    return "*".join(parts)


def fmt_poly(expr):
    t = terms(expr)
    if not t:
        return "0"
    keys = sorted(t, key=lambda ab: (ab[1], -ab[0]))
    out = ""
    for i, (a, b) in enumerate(keys):
        c = t[(a, b)]
        mono = fmt_mono(a, b)
        mag = abs(c)
        if mono == "":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def pd_text(pd):
    return ",".join("X({},{},{},{})".format(*x) for x in pd)


def parse_pd_list(text):
    text = text.replace("{", "[").replace("}", "]")
    return json.loads(text)


def shift_pd(pd, offset):
    return [[a + offset for a in x] for x in pd]


def mirror_pd(pd):
    # Reflecting the plane reverses the counterclockwise slot order while
    # keeping the incoming under-strand first.  That is also a crossing change.
    return [[a, d, c, b] for a, b, c, d in pd]


def row(name, pd, **kw):
    base = dict(
        name=name,
        pd=pd,
        alternating="",
        positive_diagram="",
        homogeneous="",
        chi="",
        chi4="",
        sigma="",
        homfly_ref="",
        split_components=1,
        source=SOURCE,
    )
    base.update(kw)
    return base


def flag(b):
    return "true" if b else "false"


def main(csv_dir):
    csv_dir = Path(csv_dir)
    knots = read_table(csv_dir / "knotinfo_data_complete.csv")
    links = read_table(csv_dir / "linkinfo_data_complete.csv")

    delta = (1 / v - v) / z
    rows = []
    polys = {}
    knot_pds = {}

    for name, k in knots.items():
        cn = k["crossing_number"]
        if not cn.isdigit() or int(cn) > 9:
            continue
        if name == "0_1":
            pd = "U(1)"
            poly = sympy.Integer(1)
        else:
            pd_list = parse_pd_list(k["pd_notation"])
            if k["positive"] == "Y":
                assert k["positive_pd_notation"] == k["pd_notation"], name
            knot_pds[name] = pd_list
            pd = pd_text(pd_list)
            poly = parse_poly(k["homfly_polynomial"])
        polys[name] = poly
        alternating = k["alternating"] == "Y"
        positive = k["positive"] == "Y" or name == "0_1"
        g = int(k["three_genus"])
        g4 = k["smooth_four_genus"]
        rows.append(
            row(
                name,
                pd,
                alternating=flag(alternating),
                positive_diagram=flag(positive),
                homogeneous="true" if (alternating or positive) else "",
                chi=1 - 2 * g,
                chi4=(1 - 2 * int(g4)) if re.fullmatch(r"\d+", g4) else "",
                sigma=-int(k["signature"]),
                homfly_ref=fmt_poly(poly),
            )
        )

    # Left-handed trefoil: mirror image of the KnotInfo representative.
    lh = mirror_pd(knot_pds["3_1"])
    lh_poly = polys["3_1"].subs(v, 1 / v)
    rows.append(
        row(
            "3_1m",
            pd_text(lh),
            alternating="true",
            positive_diagram="false",
            homogeneous="true",
            chi=-1,
            chi4=-1,
            sigma=-2,
            homfly_ref=fmt_poly(lh_poly),
            source=SOURCE + "; mirror of 3_1 (v -> 1/v, sigma negated)",
        )
    )

    for k in (2, 3):
        rows.append(
            row(
                f"U{k}",
                f"U({k})",
                alternating="true",
                positive_diagram="true",
                homogeneous="true",
                chi=k,
                chi4=k,
                sigma=0,
                homfly_ref=fmt_poly(delta ** (k - 1)),
                split_components=k,
                source="unlink: P = ((1/v - v)/z)^(k-1)",
            )
        )

    for lname, cname, note in LINKS:
        l = links[lname]
        pd_list = parse_pd_list(l["pd_notation_vector"])
        alternating = l["alternating"] == "Y"
        poly = parse_poly(l["homflypt_polynomial"])
        polys[cname] = poly
        rows.append(
            row(
                cname,
                pd_text(pd_list),
                alternating=flag(alternating),
                homogeneous="true" if alternating else "",
                sigma=-int(l["signature"]),
                homfly_ref=fmt_poly(poly),
                source=SOURCE + (f"; {note}" if note else ""),
            )
        )

    # Split unions: P(D1 u D2) = delta * P(D1) * P(D2); sigma, chi, chi4 add.
    def split(name, parts, note):
        pds, poly, sig, chi, chi4, n = [], sympy.Integer(1), 0, 0, 0, 0
        offset = 0
        for p in parts:
            if p == "0_1":
                pds.append("U(1)")
                chi = None if chi is None else chi + 1
                chi4 = None if chi4 is None else chi4 + 1
            else:
                pd = knot_pds[p] if p in knot_pds else parse_pd_list(links[p]["pd_notation_vector"])
                pds.append(pd_text(shift_pd(pd, offset)))
                offset += 2 * len(pd)
                rec = next(r for r in rows if r["name"] == p)
                sig += int(rec["sigma"])
                chi = chi + int(rec["chi"]) if rec["chi"] != "" and chi is not None else None
                chi4 = chi4 + int(rec["chi4"]) if rec["chi4"] != "" and chi4 is not None else None
            poly = poly * polys.get(p, sympy.Integer(1))
            n += 1
        poly = poly * delta ** (n - 1)
        rec_parts = [next(r for r in rows if r["name"] == p) for p in parts]
        alternating = all(r["alternating"] == "true" for r in rec_parts)
        rows.append(
            row(
                name,
                ",".join(pds),
                alternating=flag(alternating),
                homogeneous="true" if alternating else "",
                chi="" if chi is None else chi,
                chi4="" if chi4 is None else chi4,
                sigma=sig,
                homfly_ref=fmt_poly(poly),
                split_components=n,
                source=note,
            )
        )

    split("3_1 U 0_1", ["3_1", "0_1"], "split union; P = delta * P(3_1)")
    split("3_1 U 3_1", ["3_1", "3_1"], "split union; P = delta * P(3_1)^2")
    split("4_1 U 0_1", ["4_1", "0_1"], "split union; P = delta * P(4_1)")
    split("L2a1{1} U 0_1", ["L2a1{1}", "0_1"], "split union; P = delta * P(L2a1{1})")

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    fields = list(rows[0].keys())
    with open(OUT_DIR / "corpus.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)

    def jsonify(r):
        out = {}
        for k, val in r.items():
            if val == "":
                continue
            if k in ("alternating", "positive_diagram", "homogeneous"):
                out[k] = val == "true"
            else:
                out[k] = val
        return out

    with open(OUT_DIR / "corpus.json", "w") as f:
        json.dump([jsonify(r) for r in rows], f, indent=2)
        f.write("\n")
    print(f"wrote {len(rows)} records")


if __name__ == "__main__":
    main(sys.argv[1])
