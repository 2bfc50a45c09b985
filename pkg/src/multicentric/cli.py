"""Command-line front end: lemniscate | tables | expand | project.

All data files are written deterministically (floats at 12 significant
digits, keys sorted, no timestamps), so identical flags give identical
bytes.  Errors leave a machine-readable JSON object on stderr and a
nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import reference
from .lemniscate import (
    GridSpec,
    analysis_report,
    analyze,
    max_eta,
    ratio_and_angle,
    separation_gap_s,
    sum_abs_delta,
)
from .polynomials import MonicPolynomial, from_roots, model_polynomial
from .powerseries import JetSpec, fj_interpolation, root_branch
from .projection import (
    matrix_from_json,
    load_matrix_text,
    block_matrix,
    power_schedule,
    riesz_projection,
)
from .unityfold import fold_multicentric

_ANGLE_RE = re.compile(r"^\s*(?:(\d+(?:\.\d*)?)\s*\*?\s*)?(pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Angles like 'pi/70', '2*pi/70', '0.0449' or 'pi'."""
    m = _ANGLE_RE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"cannot parse angle {text!r}")
    value = float(m.group(1)) if m.group(1) else 1.0
    if m.group(2):
        value *= np.pi
    if m.group(3):
        value /= float(m.group(3))
    return value


_TERM_RE = re.compile(
    r"([+-]?)\s*(?:(\d+(?:\.\d*)?)\s*\*?\s*)?(z)?\s*(?:\^\s*(\d+))?\s*")


def parse_polynomial(text: str) -> MonicPolynomial:
    """Monic polynomials in the shapes 'z^4+1', 'z^2-1', 'z^6-2*z^3+1'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms = []
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        coef = float(m.group(2)) if m.group(2) else 1.0
        if m.group(3) is None:
            power = 0
            if m.group(2) is None:
                raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        else:
            power = int(m.group(4)) if m.group(4) else 1
        terms.append((power, sign * coef))
        pos = m.end()
    deg = max(p for p, _ in terms)
    coeffs = np.zeros(deg + 1, dtype=complex)
    for power, c in terms:
        coeffs[deg - power] += c
    if abs(coeffs[0] - 1.0) > 1e-12:
        raise ValueError(f"{text!r} is not monic (leading coefficient {coeffs[0]})")
    return from_roots(np.roots(coeffs))


def parse_roots(text: str) -> MonicPolynomial:
    toks = [t for t in text.split(",") if t.strip()]
    if not toks:
        raise ValueError("empty roots list")
    return from_roots([complex(t.strip().replace("i", "j")) for t in toks])


def fmt(x) -> float:
    return float(f"{float(x):.12g}")


def _jsonable(obj):
    if obj is None or isinstance(obj, (str, bool, np.bool_)):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return fmt(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [fmt(obj.real), fmt(obj.imag)]
    raise TypeError(f"cannot serialize {type(obj)}")


def write_json(obj, path: Path):
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def _resolve_polynomial(args) -> MonicPolynomial:
    given = [bool(getattr(args, "poly", None)), bool(getattr(args, "roots", None)),
             getattr(args, "model_degree", None) is not None]
    if sum(given) != 1:
        raise ValueError("specify exactly one of --poly, --roots, --model-degree")
    if args.poly:
        return parse_polynomial(args.poly)
    if args.roots:
        return parse_roots(args.roots)
    eps = parse_angle(args.epsilon)
    return model_polynomial(args.model_degree, eps, style=args.style)


def _grid_from_args(args, p, rho) -> GridSpec:
    if args.box is not None:
        half = float(args.box)
        return GridSpec(box=(-half, half, -half, half), resolution=args.resolution)
    return GridSpec.fitted(p, rho, args.resolution)


def cmd_lemniscate(args) -> int:
    p = _resolve_polynomial(args)
    rho = float(args.level)
    grid = _grid_from_args(args, p, rho)
    analysis = analyze(p, rho, grid)
    segments = None
    if args.segments_alpha is not None:
        from .lemniscate import segments_inside
        from .polynomials import SeparationTask

        alpha = parse_angle(args.segments_alpha)
        segments = {
            "alpha_rad": alpha,
            "inside": segments_inside(p, rho, SeparationTask(alpha)),
        }
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "contours.csv"
    with open(csv_path, "w") as fh:
        fh.write("curve_id,x,y\n")
        for cid, seg in enumerate(analysis.contours):
            for x, y in seg:
                fh.write(f"{cid},{x:.12g},{y:.12g}\n")
    report = analysis_report(analysis)
    report["polynomial"] = p.to_json()
    if segments is not None:
        report["segments"] = segments
    write_json(report, out / "analysis.json")
    written = [str(csv_path), str(out / "analysis.json")]
    if args.format == "svg":
        from .figures import render_lemniscate

        fig_path = out / "lemniscate.svg"
        render_lemniscate(analysis, fig_path)
        written.append(str(fig_path))
    print(f"{analysis.component_count} component(s) at level {rho:.12g}; "
          + "; ".join(written))
    return 0


_TABLE_COLS = ["degree", "rho", "sum_abs_delta", "s", "C", "a", "b", "ratio", "eta_max",
               "ref_sum_abs_delta", "ref_s", "ref_C", "ref_a", "ref_b", "ref_ratio",
               "ref_eta_max", "rel_err_sum", "rel_err_s", "rel_err_C"]


def cmd_tables(args) -> int:
    degrees = [int(t) for t in args.degrees.split(",") if t.strip()] if args.degrees else []
    eps = parse_angle(args.epsilon)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for d in degrees:
        rho = reference.LEVELS.get(d)
        if rho is None:
            raise ValueError(f"no reference level for degree {d}")
        p_geo = model_polynomial(d, eps, style="conjugate")
        grid = GridSpec(box=(-1.5, 1.5, -1.5, 1.5), resolution=args.resolution)
        style = reference.SUM_STYLE.get(d, "conjugate")
        p_sum = model_polynomial(d, eps, style=style)
        sad = sum_abs_delta(p_sum, rho)
        s = separation_gap_s(p_geo, rho, grid)
        C = sad * s
        ra = ratio_and_angle(p_geo, rho, grid)
        eta = max_eta(d, eps, grid)
        row = {
            "degree": d, "rho": rho, "sum_abs_delta": sad, "s": s, "C": C,
            "a": ra["a"], "b": ra["b"], "ratio": ra["ratio"], "eta_max": eta,
            "ref_sum_abs_delta": reference.SUM_ABS_DELTA[d],
            "ref_s": reference.GAP_S[d], "ref_C": reference.CONSTANT_C[d],
            "ref_a": reference.RATIO_A[d], "ref_b": reference.RATIO_B[d],
            "ref_ratio": reference.RATIO_AB[d], "ref_eta_max": reference.ETA_MAX[d],
            "rel_err_sum": abs(sad - reference.SUM_ABS_DELTA[d]) / reference.SUM_ABS_DELTA[d],
            "rel_err_s": abs(s - reference.GAP_S[d]) / reference.GAP_S[d],
            "rel_err_C": abs(C - reference.CONSTANT_C[d]) / reference.CONSTANT_C[d],
        }
        rows.append(row)
        print(f"degree {d}: sum={sad:.6g} s={s:.6g} C={C:.6g} eta={eta:.6g} "
              f"(reference C {reference.CONSTANT_C[d]:.6g}, rel err {row['rel_err_C']:.2%})")
    csv_path = out / "tables.csv"
    with open(csv_path, "w") as fh:
        fh.write(",".join(_TABLE_COLS) + "\n")
        for row in rows:
            fh.write(",".join(f"{row[c]:.12g}" if isinstance(row[c], float) else str(row[c])
                              for c in _TABLE_COLS) + "\n")
    written = [str(csv_path)]
    if args.format == "svg" and rows:
        from .figures import render_table_chart

        render_table_chart(rows, out / "tables.svg")
        written.append(str(out / "tables.svg"))
    print("wrote " + "; ".join(written))
    return 0


def _series_str(series, count=6):
    parts = []
    for m, c in enumerate(series.coeffs[:count]):
        parts.append(f"({c.real:+.10g}{c.imag:+.10g}i) w^{m}")
    return "  ".join(parts)


def cmd_expand(args) -> int:
    if not (args.poly or args.roots or args.model_degree is not None):
        p = from_roots([1.0, -1.0])
    else:
        p = _resolve_polynomial(args)
    order = args.order
    values = [1.0 if lam.real > 0 else -1.0 for lam in p.roots]
    jets = JetSpec.constants(values, order)
    ms = fj_interpolation(p, jets, order)
    print(f"sign data on {p.degree} centers; branch series to order {order}")
    for j, lam in enumerate(p.roots):
        print(f"center {j + 1}: lambda = {lam:.10g}, phi = {values[j]:+g}")
    for l in range(p.degree):
        print(f"zeta_{l + 1}(w) = {_series_str(root_branch(p, l, order))}")
    for j in range(p.degree):
        print(f"f_{j + 1}(w)    = {_series_str(ms.branches[j])}")
    zeta1 = root_branch(p, 0, order)
    from .polynomials import lagrange_basis
    from .powerseries import TruncatedSeries, polyval_series

    total = TruncatedSeries.constant(0.0, order)
    for j in range(p.degree):
        dj = polyval_series(lagrange_basis(p, j), zeta1)
        prod = dj * ms.branches[j]
        total = total + prod
        print(f"delta_{j + 1}(z(w)) f_{j + 1}(w) = {_series_str(prod)}")
    print(f"sum near center 1 = {_series_str(total)}")
    if args.n is not None:
        folded = fold_multicentric(ms, args.n)
        exact = all(
            np.array_equal(folded.reconstruct_branch(j, order).coeffs, ms.branches[j].coeffs)
            for j in range(p.degree)
        )
        print(f"fold reconstruction (n={args.n}): {'PASS' if exact else 'FAIL'}")
        if not exact:
            return 1
    return 0


def cmd_project(args) -> int:
    if args.block_example is not None:
        alpha, gamma = args.block_example
        A = block_matrix(alpha, gamma)
        p = from_roots([1.0, -1.0])
    elif args.matrix is not None:
        path = Path(args.matrix)
        if path.suffix == ".json":
            A = matrix_from_json(json.loads(path.read_text()))
        else:
            A = load_matrix_text(path)
        if not args.poly and not args.roots:
            raise ValueError("--matrix requires --poly or --roots")
        p = parse_polynomial(args.poly) if args.poly else parse_roots(args.roots)
    else:
        raise ValueError("specify --block-example or --matrix")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = None if args.auto_power else args.power
    trace = None
    if args.auto_power or n is None:
        pt = power_schedule(p, A)
        trace = pt.steps
        n = pt.n
        print("power trace: " + "; ".join(f"n={s[0]} rho={s[1]:.6g} separated={s[2]}"
                                          for s in trace))
    report = riesz_projection(p, A, n=n, assignment=args.assignment,
                              resolution=args.resolution)
    doc = report.to_json()
    if trace is not None:
        doc["power_trace"] = [[s[0], s[1], s[2]] for s in trace]
    write_json(doc, out / "projection.json")
    d = report.diagnostics
    print(f"n={report.n} rho={report.rho:.6g} order={report.order} "
          f"idempotency={d['idempotency']} commutation={d['commutation']:.3g} "
          f"trace={d['trace'][0]:.6g}{d['trace'][1]:+.3g}i bound={report.bound}")
    print(f"wrote {out / 'projection.json'}")
    return 0


def _add_poly_flags(sp, with_model=True):
    sp.add_argument("--poly", help="monic polynomial, e.g. 'z^4+1' or 'z^2-1'")
    sp.add_argument("--roots", help="comma-separated roots, e.g. '1,-1' or '1+1i,1-1i'")
    if with_model:
        sp.add_argument("--model-degree", type=int, help="even degree of the perturbed model family")
        sp.add_argument("--epsilon", default="pi/70", help="perturbation angle (accepts 'pi/70')")
        sp.add_argument("--style", default="conjugate", choices=["conjugate", "uniform"],
                        help="model perturbation style")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multicentric",
                                     description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=".", help="output directory")
    common.add_argument("--resolution", type=int, default=1001, help="grid points per axis")
    common.add_argument("--box", type=float, default=None,
                        help="half-width of the sampling box (default: fitted)")
    common.add_argument("--format", default="json", choices=["json", "csv", "svg"],
                        help="'svg' additionally renders figures")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("lemniscate", parents=[common],
                        help="contours, components and separation data at one level")
    _add_poly_flags(sp)
    sp.add_argument("--level", type=float, required=True, help="level rho of |p(z)| = rho")
    sp.add_argument("--segments-alpha", default=None,
                    help="also report whether the two vertical segments at x = +-1 "
                         "with half-height tan(alpha) fit inside (accepts 'pi/9')")
    sp.set_defaults(func=cmd_lemniscate)

    sp = sub.add_parser("tables", parents=[common],
                        help="reproduce the per-degree separation tables")
    sp.add_argument("--degrees", default="4,6,8,10,12,14", help="comma-separated even degrees")
    sp.add_argument("--epsilon", default="pi/70")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("expand", parents=[common],
                        help="print branch series and products for a sign assignment")
    _add_poly_flags(sp)
    sp.add_argument("--order", type=int, default=10, help="truncation order")
    sp.add_argument("--n", type=int, default=None, help="also fold by w^n and verify reconstruction")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("project", parents=[common],
                        help="Riesz spectral projection of a matrix")
    sp.add_argument("--block-example", nargs=2, type=float, metavar=("ALPHA", "GAMMA"),
                    help="use the 4x4 coupled block matrix")
    sp.add_argument("--matrix", help="matrix file (.json or whitespace text)")
    sp.add_argument("--poly", help="polynomial for the calculus, e.g. 'z^2-1'")
    sp.add_argument("--roots", help="roots form of the polynomial")
    sp.add_argument("--power", type=int, default=None, help="fixed power n")
    sp.add_argument("--auto-power", action="store_true", help="pick n by repeated squaring")
    sp.add_argument("--assignment", default="sign", choices=["sign", "indicator-right", "ones"])
    sp.set_defaults(func=cmd_project)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface every failure as machine-readable JSON
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
