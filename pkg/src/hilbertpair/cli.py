"""Command-line interface.

    python3 -m hilbertpair design --L 2 --M 4 --out bank.json
    python3 -m hilbertpair verify bank.json
    python3 -m hilbertpair analyze bank.json --csv spectra.csv
    python3 -m hilbertpair table1 --out table1.csv
    python3 -m hilbertpair figures --which 1 --out figs/

Filter banks are stored as JSON; floats are written with ``repr`` so every
value round-trips exactly. Grids are written as CSV with a ``#`` header.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bezout, factorize, spectral
from .errors import HilbertPairError, ParseError
from .factorize import FilterBank, PhaseChoice
from .polycore import LaurentFilter, RealPoly

SCHEMA_VERSION = "1"
FILTER_NAMES = ("h0", "g0", "h1", "g1")

DEFAULT_TOL_PR = 1e-8
DEFAULT_TOL_DC = 1e-10
DEFAULT_TOL_SLOPE = 0.2
DEFAULT_TOL_REF = 1e-8
# below this predicted size at the top of the fit window the Hilbert defect
# cannot be resolved in double precision
RESOLVABLE_DEFECT = 1e-12


# ---------------------------------------------------------------------------
# Document
# ---------------------------------------------------------------------------


@dataclass
class FilterBankDocument:
    L: int
    M: int
    phase: str
    method: str
    h0: list[float]
    g0: list[float]
    h1: list[float]
    g1: list[float]
    r_coeffs: list[float]
    q_coeffs: list[float]
    offsets: dict[str, int] = field(default_factory=dict)
    diagnostics: dict[str, float] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_bank(cls, bank: FilterBank, bezout_residual: float = math.nan) -> "FilterBankDocument":
        filters = {name: getattr(bank, name) for name in FILTER_NAMES}
        return cls(
            L=bank.L,
            M=bank.M,
            phase=bank.phase.label,
            method=bank.method,
            **{name: [float(c) for c in f.coeffs] for name, f in filters.items()},
            r_coeffs=[float(c) for c in bank.r.coeffs] if bank.r is not None else [],
            q_coeffs=[float(c) for c in bank.q_poly.coeffs],
            offsets={name: int(f.lo) for name, f in filters.items()},
            diagnostics={
                "pr_defect": factorize.verify_pr(bank),
                "bezout_residual": float(bezout_residual),
                "h0_at_1": float(np.real(bank.h0(1.0))),
            },
        )

    def filter(self, name: str) -> LaurentFilter:
        return LaurentFilter(int(self.offsets.get(name, 0)), getattr(self, name))

    def to_bank(self) -> FilterBank:
        return FilterBank(
            L=self.L,
            M=self.M,
            phase=PhaseChoice(self.phase),
            h0=self.filter("h0"),
            g0=self.filter("g0"),
            h1=self.filter("h1"),
            g1=self.filter("g1"),
            q_poly=RealPoly(self.q_coeffs),
            r=RealPoly(self.r_coeffs) if self.r_coeffs else None,
            method=self.method,
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "L": self.L,
            "M": self.M,
            "phase": self.phase,
            "method": self.method,
            **{name: list(getattr(self, name)) for name in FILTER_NAMES},
            "offsets": dict(self.offsets),
            "r_coeffs": list(self.r_coeffs),
            "q_coeffs": list(self.q_coeffs),
            "diagnostics": dict(self.diagnostics),
        }


def serialize(doc: FilterBankDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2) + "\n"


def _float_list(data: dict, key: str) -> list[float]:
    value = data.get(key)
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise ParseError(f"field {key!r} must be an array of numbers")
    return [float(v) for v in value]


def parse(text: str) -> FilterBankDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {data.get('schema_version')!r}")
    for key in ("L", "M"):
        if not isinstance(data.get(key), int) or data[key] < 1:
            raise ParseError(f"field {key!r} must be a positive integer")
    if data.get("phase") not in {p.value for p in PhaseChoice}:
        raise ParseError(f"unknown phase {data.get('phase')!r}")
    if data.get("method") not in {m.value for m in bezout.Method}:
        raise ParseError(f"unknown method {data.get('method')!r}")
    offsets = data.get("offsets", {})
    if not isinstance(offsets, dict) or not all(isinstance(v, int) for v in offsets.values()):
        raise ParseError("offsets must map filter names to integers")
    diagnostics = data.get("diagnostics", {})
    if not isinstance(diagnostics, dict):
        raise ParseError("diagnostics must be an object")
    return FilterBankDocument(
        L=data["L"],
        M=data["M"],
        phase=data["phase"],
        method=data["method"],
        **{name: _float_list(data, name) for name in FILTER_NAMES},
        r_coeffs=_float_list(data, "r_coeffs"),
        q_coeffs=_float_list(data, "q_coeffs"),
        offsets=offsets,
        diagnostics={k: float(v) for k, v in diagnostics.items()},
        schema_version=data["schema_version"],
    )


def read_document(path: str | Path) -> FilterBankDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse(text)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _error_payload(exc: Exception) -> str:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("condition", "y_min", "value"):
        v = getattr(exc, attr, None)
        if v is not None:
            payload[attr] = float(v)
    return json.dumps(payload, indent=2) + "\n"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(path: Path, header: list[str], columns: list[str], rows) -> None:
    lines = [f"# {h}" for h in header]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def canonicalize(coeffs) -> np.ndarray:
    """Drop the support shift and fix the overall sign (first nonzero > 0)."""
    c = np.asarray(coeffs, dtype=float)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return c[:0]
    c = c[nz[0] : nz[-1] + 1]
    return c if c[0] > 0 else -c


def compare_reference(doc: FilterBankDocument, reference: dict) -> dict[str, float]:
    """Max coefficient deviation per filter present in ``reference``."""
    out = {}
    for name in FILTER_NAMES:
        if name not in reference:
            continue
        a = canonicalize(getattr(doc, name))
        b = canonicalize(reference[name])
        if len(a) != len(b):
            out[name] = math.inf
        else:
            out[name] = float(np.max(np.abs(a - b))) if len(a) else 0.0
    return out


def predicted_hilbert_defect(L: int, omega: float) -> float:
    """Leading term of ``|G0 - H0 e^{-i w/2}|`` near zero frequency."""
    return 2.0 * math.sqrt(2.0) * (omega / 4.0) ** (2 * L + 1)


def slope_ok(slope: float, target: float, tol: float, resolvable: bool) -> bool:
    if math.isinf(slope):
        return not resolvable
    return abs(slope - target) <= tol


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_design(args) -> int:
    sol = bezout.solve(args.L, args.M, args.method)
    phase = PhaseChoice(args.phase)
    Q = factorize.riesz_factor(sol.r_reflected, phase, reflected=True)
    bank = factorize.assemble_bank(args.L, args.M, Q, phase, sol.r, sol.method.value)
    _emit(serialize(FilterBankDocument.from_bank(bank, sol.residual)), args.out)
    return 0


def verify_document(doc: FilterBankDocument, tol_pr: float = DEFAULT_TOL_PR,
                    tol_dc: float = DEFAULT_TOL_DC, tol_slope: float = DEFAULT_TOL_SLOPE,
                    reference: dict | None = None, tol_ref: float = DEFAULT_TOL_REF) -> dict:
    bank = doc.to_bank()
    pr = factorize.verify_pr(bank)
    dc = float(abs(np.real(bank.h0(1.0)) - math.sqrt(2.0)))
    vm = factorize.vanishing_moment_order(bank)
    hs = factorize.hilbert_order_check(bank)
    top = float(factorize.SLOPE_OMEGA[-1])
    checks = {
        "pr_defect": pr <= tol_pr,
        "h0_at_1": dc <= tol_dc,
        "vanishing_moment_slope": slope_ok(vm, doc.M, tol_slope, True),
        "hilbert_slope": slope_ok(
            hs, 2 * doc.L + 1, tol_slope,
            predicted_hilbert_defect(doc.L, top) > RESOLVABLE_DEFECT,
        ),
    }
    report = {
        "pr_defect": pr,
        "h0_at_1_minus_sqrt2": dc,
        "vanishing_moment_slope": vm,
        "hilbert_slope": hs,
    }
    if reference is not None:
        dev = compare_reference(doc, reference)
        report["reference_deviation"] = dev
        checks["reference"] = all(v <= tol_ref for v in dev.values())
    report["checks"] = checks
    report["ok"] = all(checks.values())
    return report


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    return obj


def cmd_verify(args) -> int:
    doc = read_document(args.path)
    reference = None
    if args.reference:
        ref_path = Path(args.reference)
        if ref_path.exists():
            try:
                reference = json.loads(ref_path.read_text())
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid reference file: {exc}") from exc
        else:
            sys.stderr.write(f"reference {ref_path} not found; skipping comparison\n")
    report = verify_document(doc, args.tol_pr, reference=reference)
    sys.stdout.write(json.dumps(_json_safe(report), indent=2) + "\n")
    return 0 if report["ok"] else 1


def cmd_analyze(args) -> int:
    bank = read_document(args.path).to_bank()
    report, grid = spectral.analyze(bank, args.omega_max, args.grid_n,
                                    args.cascade_depth, args.beta_terms)
    _emit(json.dumps(_json_safe(report.as_dict()), indent=2) + "\n", args.out)
    if args.csv:
        write_csv(
            Path(args.csv),
            [f"spectra for L={bank.L} M={bank.M} phase={bank.phase.label}",
             f"omega_max={args.omega_max!r} grid_n={args.grid_n} "
             f"cascade_depth={args.cascade_depth} beta_terms={args.beta_terms}"],
            ["omega", "abs_psi_h", "abs_psi_g", "abs_analytic", "u_L"],
            zip(grid.omega, np.abs(grid.psi_h), np.abs(grid.psi_g),
                np.abs(grid.analytic), spectral.u_L(bank.L, grid.omega, args.beta_terms)),
        )
    return 0


def table1_rows(Lmax: int = 8, Mmax: int = 8, method: str = "recursive"):
    rows = []
    for M in range(1, Mmax + 1):
        cells, reasons = [], []
        for L in range(1, Lmax + 1):
            try:
                bank = factorize.design_bank(L, M, method=method)
                cells.append(f"{spectral.sobolev_exponent(bank):.3f}")
            except HilbertPairError as exc:
                cells.append(".")
                reasons.append(f"L={L}: {type(exc).__name__}")
        rows.append([str(M), *cells, "; ".join(reasons)])
    return rows


def cmd_table1(args) -> int:
    rows = table1_rows(args.Lmax, args.Mmax, args.method)
    lines = [
        "# Sobolev exponent of psi_H; rows M, columns L",
        f"# method={args.method}",
        ",".join(["M", *[f"L{L}" for L in range(1, args.Lmax + 1)], "reason"]),
    ]
    lines += [",".join(r) for r in rows]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------

SVG_W, SVG_H, SVG_PAD = 640, 400, 40
SVG_COLORS = ("black", "red", "green", "blue", "orange", "purple")


def polyline_svg(x, series: dict[str, np.ndarray], title: str, logy: bool = False) -> str:
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    if logy:
        ys = {k: np.log10(np.maximum(v, 1e-300)) for k, v in ys.items()}
        lo = max(min(float(np.min(v)) for v in ys.values()), -16.0)
        ys = {k: np.maximum(v, lo) for k, v in ys.items()}
    y_lo = min(float(np.min(v)) for v in ys.values())
    y_hi = max(float(np.max(v)) for v in ys.values())
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    x_lo, x_hi = float(x[0]), float(x[-1])

    def px(v):
        return SVG_PAD + (v - x_lo) / (x_hi - x_lo) * (SVG_W - 2 * SVG_PAD)

    def py(v):
        return SVG_H - SVG_PAD - (v - y_lo) / (y_hi - y_lo) * (SVG_H - 2 * SVG_PAD)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}">',
        f'<text x="{SVG_PAD}" y="20" font-size="14">{title}</text>',
        f'<rect x="{SVG_PAD}" y="{SVG_PAD}" width="{SVG_W - 2 * SVG_PAD}" '
        f'height="{SVG_H - 2 * SVG_PAD}" fill="none" stroke="gray"/>',
    ]
    for i, (name, y) in enumerate(ys.items()):
        color = SVG_COLORS[i % len(SVG_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        parts.append(
            f'<text x="{SVG_W - SVG_PAD - 120}" y="{SVG_PAD + 16 * (i + 1)}" '
            f'font-size="12" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


FIG1_L = (2, 4, 8, 16)
FIG2_M = (2, 3, 4)
FIG2_L = (2, 4, 8)
FIG3_L = tuple(range(1, 9))
FIG3_M = (2, 3, 4)


def figure1(out: Path, n: int = 1025, omega_max: float = 4 * math.pi,
            terms: int = spectral.DEFAULT_BETA_TERMS) -> None:
    omega = np.linspace(-omega_max, omega_max, n)
    omega[n // 2] = 0.0
    curves = {f"L{L}": spectral.step_distance(L, omega, terms) for L in FIG1_L}
    write_csv(out / "figure1.csv",
              ["|1 - exp(i eta_L(omega))|", f"omega_max={omega_max!r} n={n} beta_terms={terms}"],
              ["omega", *curves], zip(omega, *curves.values()))
    (out / "figure1.svg").write_text(polyline_svg(omega, curves, "|1 - exp(i eta_L)|"))


def figure2(out: Path, n: int = 2049, omega_max: float = spectral.DEFAULT_OMEGA_MAX,
            depth: int = spectral.DEFAULT_DEPTH, terms: int = spectral.DEFAULT_BETA_TERMS) -> None:
    for M in FIG2_M:
        grids = {L: spectral.cascade_spectra(factorize.design_bank(L, M), omega_max, n,
                                             depth, terms) for L in FIG2_L}
        omega = grids[FIG2_L[0]].omega
        cols = {}
        for L, g in grids.items():
            cols[f"psi_h_L{L}"] = np.abs(g.psi_h)
        for L, g in grids.items():
            cols[f"analytic_L{L}"] = np.abs(g.analytic)
        write_csv(out / f"figure2_M{M}.csv",
                  [f"|psi_H| and |psi_H + i psi_G| for M={M}",
                   f"omega_max={omega_max!r} n={n} cascade_depth={depth}"],
                  ["omega", *cols], zip(omega, *cols.values()))
        (out / f"figure2_M{M}.svg").write_text(
            polyline_svg(omega, {k: v for k, v in cols.items() if k.startswith("analytic")},
                         f"|psi_H + i psi_G|, M={M}")
        )


def figure3_values(n: int = spectral.DEFAULT_GRID_N, omega_max: float = spectral.DEFAULT_OMEGA_MAX,
                   depth: int = spectral.DEFAULT_DEPTH):
    table = {}
    for M in FIG3_M:
        for L in FIG3_L:
            grid = spectral.cascade_spectra(factorize.design_bank(L, M), omega_max, n, depth)
            table[M, L] = spectral.leakage_measures(grid)
    return table


def figure3(out: Path, n: int = spectral.DEFAULT_GRID_N,
            omega_max: float = spectral.DEFAULT_OMEGA_MAX,
            depth: int = spectral.DEFAULT_DEPTH) -> None:
    table = figure3_values(n, omega_max, depth)
    cols = []
    for M in FIG3_M:
        cols += [f"E1_M{M}", f"E2_M{M}"]
    rows = [[float(L)] + [v for M in FIG3_M for v in table[M, L]] for L in FIG3_L]
    write_csv(out / "figure3.csv",
              ["E1 and E2 against L", f"omega_max={omega_max!r} n={n} cascade_depth={depth}"],
              ["L", *cols], rows)
    series = {}
    for M in FIG3_M:
        series[f"E1 M={M}"] = [table[M, L][0] for L in FIG3_L]
        series[f"E2 M={M}"] = [table[M, L][1] for L in FIG3_L]
    (out / "figure3.svg").write_text(polyline_svg(FIG3_L, series, "log10 E1, E2", logy=True))


def cmd_figures(args) -> int:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    which = args.which or [1, 2, 3]
    if 1 in which:
        figure1(out, terms=args.beta_terms)
    if 2 in which:
        figure2(out, omega_max=args.omega_max, depth=args.cascade_depth, terms=args.beta_terms)
    if 3 in which:
        figure3(out, n=args.grid_n, omega_max=args.omega_max, depth=args.cascade_depth)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_spectral_flags(p) -> None:
    p.add_argument("--omega-max", type=float, default=spectral.DEFAULT_OMEGA_MAX)
    p.add_argument("--grid-n", type=_positive_int, default=spectral.DEFAULT_GRID_N)
    p.add_argument("--cascade-depth", type=_positive_int, default=spectral.DEFAULT_DEPTH)
    p.add_argument("--beta-terms", type=_positive_int, default=spectral.DEFAULT_BETA_TERMS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbertpair", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design a filter bank and write it as JSON")
    p.add_argument("--L", type=_positive_int, required=True)
    p.add_argument("--M", type=_positive_int, required=True)
    p.add_argument("--phase", choices=[c.value for c in PhaseChoice], default="mid",
                   help="root selection: 'mid' keeps every root inside the unit circle "
                        "(what is usually called minimum phase), 'min' alternates inside "
                        "and outside roots")
    p.add_argument("--method", choices=[m.value for m in bezout.Method], default="recursive")
    p.add_argument("--out")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", help="check reconstruction, normalization and orders")
    p.add_argument("path")
    p.add_argument("--tol-pr", type=float, default=DEFAULT_TOL_PR)
    p.add_argument("--reference", help="JSON file with externally computed filters")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="spectral analysis of a designed bank")
    p.add_argument("path")
    _add_spectral_flags(p)
    p.add_argument("--csv", help="also write the spectra grid")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table1", help="Sobolev exponents over an (M, L) grid")
    p.add_argument("--Lmax", type=_positive_int, default=8)
    p.add_argument("--Mmax", type=_positive_int, default=8)
    p.add_argument("--method", choices=[m.value for m in bezout.Method], default="recursive")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("figures", help="CSV and SVG data for the figures")
    p.add_argument("--which", type=int, choices=(1, 2, 3), action="append")
    _add_spectral_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HilbertPairError as exc:
        sys.stdout.write(_error_payload(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
