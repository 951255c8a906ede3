"""Command line: rt <command> --config FILE [--out DIR] [--seed N] [--threads N].

Exit codes: 0 ok, 1 invalid input/config, 2 stable configuration,
3 numerical failure, 4 contour failure, 5 I/O error.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, config, dispersion, mode_profile, simulator, symbol, witness, zeros
from .errors import OverflowGuard, RTError
from .grid import GridField, GridSpec, atomic_write

EXIT_IO = 5


class Outputs:
    """Collects files written by a command so the manifest can list them."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.files = []

    def path(self, name):
        self.files.append(name)
        return self.root / name

    def text(self, name, content):
        atomic_write(self.path(name), content.encode())

    def json(self, name, obj):
        self.text(name, json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")

    def csv(self, name, header, rows):
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_cell(x) for x in row) + "\n")
        self.text(name, buf.getvalue())

    def field(self, name, fld: GridField, extra=None):
        bin_path, json_path = fld.save(self.root / name, extra)
        self.files += [bin_path.name, json_path.name]

    def manifest(self, command, resolved):
        entries = []
        for name in sorted(set(self.files)):
            data = (self.root / name).read_bytes()
            entries.append({"name": name, "bytes": len(data),
                            "sha256": hashlib.sha256(data).hexdigest()})
        body = {"command": command, "version": __version__, "config": resolved,
                "files": entries}
        atomic_write(self.root / "manifest.json",
                     (json.dumps(body, indent=2, sort_keys=True) + "\n").encode())


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def _finite(x):
    """JSON-safe float (inf and nan become strings)."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


# commands ------------------------------------------------------------------

def cmd_symbol(block, p, out, args):
    rows = []
    for pt in block["points"]:
        lam = config.as_complex(pt["lambda"])
        s = complex(symbol.symbol_s(lam, pt["tau"], p))
        rows.append((lam.real, lam.imag, float(pt["tau"]), s.real, s.imag))
    out.csv("symbol.csv", ["lambda_re", "lambda_im", "tau", "s_re", "s_im"], rows)


def cmd_curve(block, p, out, args):
    curve = dispersion.dispersion_curve(p, block["n_points"], block["tol"])
    out.csv("curve.csv", ["tau", "lambda", "residual"], curve.rows())
    out.json("curve.json", {"tau_star": curve.tau_star, "n_points": len(curve.taus),
                            "max_residual": float(curve.residuals.max())})


def cmd_max(block, p, out, args):
    g = dispersion.max_growth(p, block["tol"], block["n_coarse"])
    c_small, c_star = dispersion.asymptotic_constants(p)
    body = g.to_dict()
    body.update(tau_star=dispersion.cutoff_wavenumber(p), c_small=c_small, c_star=c_star)
    out.json("max.json", body)


def cmd_zeros(block, p, out, args):
    results = []
    for tau in block["taus"]:
        region = zeros.Rectangle(**block["region"]) if "region" in block else None
        zc = zeros.count_zeros_rhp(tau, p, region)
        entry = {"tau": float(tau), **zc.to_dict()}
        if zc.count and "locate_size" in block:
            boxes = zeros.locate_zeros(tau, p, zc.region, block["locate_size"])
            entry["located"] = [{"center": _cplx(b.center), "count": n, "box": b.to_dict()}
                                for b, n in boxes]
        results.append(entry)
    out.json("zeros.json", {"results": results})


def cmd_profile(block, p, out, args):
    if block["tau"] is None:
        block["tau"] = dispersion.max_growth(p).tau_max if p.is_heavy_on_top() else 1.0
    tau = float(block["tau"])
    if block["lambda"] is None:
        block["lambda"] = dispersion.growth_rate(tau, p) if (
            p.is_heavy_on_top() and tau < dispersion.cutoff_wavenumber(p)) else 1.0
    if block["y_extent"] is None:
        block["y_extent"] = 5.0 / tau
    prof = mode_profile.solve_mode(config.as_complex(block["lambda"]), tau,
                                   config.as_complex(block["h_amp"]), p)
    y = np.linspace(-block["y_extent"], block["y_extent"], block["n_y"])
    v, w, pi = prof.evaluate(y)
    out.csv("profile.csv", ["y", "v_re", "v_im", "w_re", "w_im", "pi_re", "pi_im"],
            zip(y, v.real, v.imag, w.real, w.imag, pi.real, pi.imag))
    out.json("profile.json", {
        "tau": tau, "lambda": _cplx(prof.lam), "h_amp": _cplx(prof.h_amp),
        "coeffs_lower": [_cplx(c) for c in prof.coeffs_lower],
        "coeffs_upper": [_cplx(c) for c in prof.coeffs_upper],
        "pressure_coeffs": [_cplx(c) for c in prof.pressure_coeffs],
        "q1": _cplx(prof.q1), "q2": _cplx(prof.q2),
        "residual": mode_profile.residual_check(prof, p),
    })


def cmd_witness(block, p, out, args):
    if block["xi0"] is None:
        # away from tau_max, where s(lambda0, .) has a double zero and the
        # residual is second order in eps
        block["xi0"] = 0.5 * dispersion.cutoff_wavenumber(p)
    xi0 = float(block["xi0"])
    if block["lambda0"] is None:
        block["lambda0"] = dispersion.growth_rate(xi0, p)
    lam0 = float(block["lambda0"])
    norm_p = math.inf if block["norm_p"] == "inf" else float(block["norm_p"])
    eps = sorted((f * xi0 for f in block["eps_fractions"]), reverse=True)
    spec = witness.witness_grid(xi0, min(eps), dim=block["dim"], n=block["n"], eps_max=max(eps))
    block["n"] = spec.n
    vec = witness.carrier_vector(xi0, spec.dim)
    rows = []
    for e in eps:
        h = witness.build_heps(vec, e, witness.build_window(e, spec))
        g = witness.apply_symbol_multiplier(h, lam0, p)
        rows.append((e, g.norm(norm_p) / h.norm(norm_p)))
    slope = float(np.polyfit(np.log([r[0] for r in rows]), np.log([r[1] for r in rows]), 1)[0])
    out.csv("witness.csv", ["epsilon", "ratio"], rows)
    out.json("witness.json", {"xi0": xi0, "lambda0": lam0, "slope": slope,
                              "s_at_xi0": _cplx(symbol.symbol_s(lam0, xi0, p)),
                              "grid": spec.to_dict()})
    out.field("h_eps", h)
    out.field("g_eps", g)


def _initial_field(block, spec, seed):
    init = block["initial"]
    if init["kind"] == "pure-mode":
        index = list(init["index"]) + [0] * (spec.dim - len(init["index"]))
        return simulator.pure_mode(spec, index[: spec.dim], init.get("amplitude", 1.0))
    if init["kind"] == "white-noise":
        return simulator.white_noise(spec, seed, init.get("amplitude", 1e-6))
    fld = GridField.load(Path(init["path"]).with_suffix(""))
    if fld.spec != spec:
        raise config.ConfigInvalid([f"simulate/initial/path: grid {fld.spec} != {spec}"])
    return fld


def cmd_simulate(block, p, out, args, seed):
    if block["length"] is None:
        peak = dispersion.max_growth(p).tau_max if p.is_heavy_on_top() else 1.0
        block["length"] = 2.0 * math.pi * 8 / peak
    spec = GridSpec(block["n"], float(block["length"]), block["dim"])
    field0 = _initial_field(block, spec, seed)
    table = simulator.build_growth_table(p, spec, workers=args.threads)
    run = simulator.SimulationRun(field0, p, table)
    out.csv("table.csv", ["wavenumber", "rate_re", "rate_im", "provenance"], table.rows())
    diag, done, blowup = [], [], None
    for i, t in enumerate(block["times"]):
        try:
            snap = simulator.evolve(run, t)
        except OverflowGuard as exc:
            blowup = exc.blowup_time
            print(f"rt: {exc}; later snapshots skipped", file=sys.stderr)
            break
        out.field(f"snapshot_{i:03d}", snap, {"t": float(t)})
        d = simulator.diagnostics(run, t)
        diag.append((d["t"], d["peak_wavenumber"], d["l2_amplitude"], d["max_height"],
                     d["efolds"]))
        done.append(float(t))
    out.csv("diagnostics.csv", ["t", "peak_wavenumber", "l2_amplitude", "max_height", "efolds"],
            diag)
    out.json("simulate.json", {"grid": spec.to_dict(), "times_done": done,
                               "blowup_time": None if blowup is None else _finite(blowup),
                               "provenance_counts": table.counts()})


HANDLERS = {"symbol": cmd_symbol, "curve": cmd_curve, "max": cmd_max, "zeros": cmd_zeros,
            "profile": cmd_profile, "witness": cmd_witness, "simulate": cmd_simulate}


def build_parser():
    ap = argparse.ArgumentParser(prog="rt", description="Rayleigh-Taylor dispersion toolkit")
    ap.add_argument("command", choices=config.COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for tables")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise config.ConfigInvalid(["--seed: must be an unsigned 64-bit integer"])
        if args.threads < 1:
            raise config.ConfigInvalid(["--threads: must be >= 1"])
        cfg = config.parse_config(args.config)
        p = config.params_of(cfg)
        resolved = config.resolve(cfg, args.command, args.seed)
        block = resolved[args.command]
        out = Outputs(args.out)
        if args.command == "simulate":
            cmd_simulate(block, p, out, args, resolved["seed"])
        else:
            HANDLERS[args.command](block, p, out, args)
        out.manifest(args.command, resolved)
    except RTError as exc:
        print(f"rt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"rt: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


def main(argv=None):
    sys.exit(run(argv))
