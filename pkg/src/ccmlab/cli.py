"""Command line front end.

Every subcommand takes --config FILE with flat `key = value` lines; explicit
flags win over the file. Output goes to --out as CSV, or stdout with "-".
"""

from __future__ import annotations

import argparse
import contextlib
import sys

from .bound import (
    BoundConfig,
    NoiseStats,
    distance_spectrum,
    enumerate_loops,
    pb_bound,
)
from .ccm import multi_tent
from .conjugation import load_lut, save_lut
from .led import (
    characterize,
    equivalent_ebn0_db,
    ideal_predistortion,
    load_led,
    noise_var,
    reference_led,
)
from .link import LinkConfig, sweep, write_ber_csv
from .optimize import OptimizeSpec, optimize_conjugation, write_report


def parse_config(path) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"bad config line {line!r}")
            out[key.strip()] = value.strip()
    return out


class Resolver:
    """Flag value if given, else config value, else default."""

    def __init__(self, args):
        self.args = args
        self.config = parse_config(args.config) if args.config else {}

    def get(self, name, default, cast=str):
        v = getattr(self.args, name, None)
        if v is not None:
            return v
        if name in self.config:
            return cast(self.config[name])
        return default

    def floats(self, name, default):
        v = self.get(name, None)
        if v is None:
            return default
        if isinstance(v, str):
            return tuple(float(x) for x in v.split(","))
        return v


def _load_led_arg(name: str):
    if name == "bundled":
        return reference_led()
    if name == "predistorted":
        return ideal_predistortion(reference_led())
    return load_led(name)


def _load_table_arg(name):
    if name is None or name == "identity":
        return None
    return load_lut(name)


@contextlib.contextmanager
def _out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _cmd_characterize(args):
    r = Resolver(args)
    led = _load_led_arg(r.get("led", "bundled"))
    ibos = r.floats("ibo", (0.0, 10.0, 40.0))
    with _out(r.get("out", "-")) as fh:
        fh.write("ibo_db,rho,C,out_mean,out_power,sigma_eta_sq,ceiling_ebn0_db\n")
        for ibo in ibos:
            nl, st = characterize(led, ibo)
            ceiling = equivalent_ebn0_db(st.gain, 1.0, st.distortion_var, 0.0)
            fh.write(
                f"{ibo:g},{nl.back_off:.8g},{st.gain:.8g},{st.out_mean:.8g},"
                f"{st.out_power:.8g},{st.distortion_var:.8g},{ceiling:.6g}\n"
            )
    return 0


def _cmd_loops(args):
    r = Resolver(args)
    params = multi_tent(int(r.get("q", 6, int)))
    l_max = int(r.get("l_max", 2 * params.q, int))
    loops = enumerate_loops(params, l_max)
    with _out(r.get("out", "-")) as fh:
        fh.write("index,length,weight,bits\n")
        for i, lp in enumerate(loops):
            word = "".join(str(b) for b in lp.bits)
            fh.write(f"{i},{lp.length},{lp.weight},{word}\n")
    return 0


def _noise_from_args(r, ebn0_db: float) -> NoiseStats:
    led_name = r.get("led", None)
    if led_name is None:
        return NoiseStats.clean(ebn0_db)
    led = _load_led_arg(led_name)
    _, st = characterize(led, float(r.get("ibo", 0.0, float)))
    return NoiseStats(
        st.gain, st.distortion_var, noise_var(st.gain, 1.0, ebn0_db)
    )


def _cmd_bound(args):
    r = Resolver(args)
    params = multi_tent(int(r.get("q", 6, int)))
    table = _load_table_arg(r.get("table", None))
    mode = r.get("mode", "exact")
    l_max = int(r.get("l_max", 2 * params.q, int))
    if mode == "exact":
        cfg = BoundConfig.exact(l_max)
    else:
        cfg = BoundConfig.subsampled(
            l_max, int(r.get("count", 4096, int)), int(r.get("seed", 0, int))
        )
    with _out(r.get("out", "-")) as fh:
        fh.write("ebn0_db,bound\n")
        for e in r.floats("ebn0", (4.0, 6.0, 8.0, 10.0, 12.0)):
            b = pb_bound(params, _noise_from_args(r, e), table, cfg)
            fh.write(f"{e:g},{b:.6g}\n")
    return 0


def _cmd_optimize(args):
    r = Resolver(args)
    led = _load_led_arg(r.get("led", "bundled"))
    spec = OptimizeSpec(
        params=multi_tent(int(r.get("q", 6, int))),
        led=led,
        ibo_db=float(r.get("ibo", 0.0, float)),
        ebn0_db=float(r.get("ebn0", 10.0, float)),
        p=int(r.get("p", 64, int)),
        l_max=int(r.get("l_max", 0, int)) or None,
        subsample=int(r.get("subsample", 4096, int)),
        seed=int(r.get("seed", 0, int)),
        max_iter=int(r.get("max_iter", 60, int)),
    )
    start = _load_table_arg(r.get("start", None))
    result = optimize_conjugation(spec, start)
    out_table = r.get("out_table", None)
    if out_table:
        save_lut(out_table, result.table)
    report = r.get("report", None)
    if report:
        write_report(report, spec, result)
    print(
        f"bound {result.initial_bound:.4g} -> {result.final_bound:.4g} "
        f"({result.initial_bound / result.final_bound:.3g}x) in "
        f"{result.n_iterations} iterations, {result.n_evals} evaluations"
    )
    print(
        f"min gap {result.min_gap:.3g}, top-8 gap share "
        f"{result.plateau.top_share:.3g}, wide gaps {result.plateau.n_wide}"
    )
    return 0


def _cmd_simulate(args):
    r = Resolver(args)
    led_name = r.get("led", None)
    cfg = LinkConfig(
        scheme=r.get("scheme", "ccm"),
        led=_load_led_arg(led_name) if led_name else None,
        ibo_db=float(r.get("ibo", 0.0, float)),
        predistorted=bool(getattr(args, "predistorted", False)),
        table=_load_table_arg(r.get("table", None)),
        params=multi_tent(int(r.get("q", 6, int))),
        interleaver_seed=int(r.get("interleaver_seed", 1, int)),
        noise_seed=int(r.get("noise_seed", 2, int)),
        min_errors=int(r.get("min_errors", 100, int)),
        max_bits=float(r.get("max_bits", 1e8, float)),
    )
    points = sweep(cfg, r.floats("ebn0", (4.0, 6.0, 8.0, 10.0)))
    with _out(r.get("out", "-")) as fh:
        write_ber_csv(fh, points)
    return 0


def _cmd_spectrum(args):
    r = Resolver(args)
    params = multi_tent(int(r.get("q", 6, int)))
    spec = distance_spectrum(
        params,
        _load_table_arg(r.get("table", None)),
        int(r.get("l_max", 2 * params.q, int)),
        float(r.get("bin_width", 0.25, float)),
    )
    with _out(r.get("out", "-")) as fh:
        fh.write("d2_lo,d2_hi,mass\n")
        for lo, hi, m in zip(spec.edges[:-1], spec.edges[1:], spec.mass):
            fh.write(f"{lo:g},{hi:g},{m:.6g}\n")
    print(
        f"min d^2 {spec.min_d2:.6g}, max d^2 {spec.max_d2:.6g}",
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="ccmlab",
        description="Chaotic trellis modulation over clipped optical OFDM",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="flat key = value defaults file")
        p.add_argument("--out", help="output CSV path, - for stdout")
        p.set_defaults(fn=fn)
        return p

    p = add("characterize", _cmd_characterize, "LED gain and distortion vs back-off")
    p.add_argument("--led", help="bundled, predistorted, or a saved curve file")
    p.add_argument("--ibo", help="comma list of back-off values in dB")

    p = add("loops", _cmd_loops, "enumerate the codec's error loops")
    p.add_argument("--q", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)

    p = add("bound", _cmd_bound, "analytic error bound vs Eb/N0")
    p.add_argument("--q", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    p.add_argument("--led")
    p.add_argument("--ibo", type=float)
    p.add_argument("--ebn0", help="comma list in dB")
    p.add_argument("--table", help="LUT file, or identity")
    p.add_argument("--mode", choices=["exact", "subsampled"])
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)

    p = add("optimize", _cmd_optimize, "search a remapping table")
    p.add_argument("--q", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    p.add_argument("--led")
    p.add_argument("--ibo", type=float)
    p.add_argument("--ebn0", type=float)
    p.add_argument("--p", type=int)
    p.add_argument("--subsample", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--start", help="LUT file to start from")
    p.add_argument("--out-table", dest="out_table", help="LUT file to write")
    p.add_argument("--report", help="report file to write")

    p = add("simulate", _cmd_simulate, "Monte Carlo link run")
    p.add_argument("--scheme", choices=["ccm", "bpsk", "tcm"])
    p.add_argument("--q", type=int)
    p.add_argument("--led")
    p.add_argument("--predistorted", action="store_true")
    p.add_argument("--ibo", type=float)
    p.add_argument("--table")
    p.add_argument("--ebn0", help="comma list in dB")
    p.add_argument("--interleaver-seed", dest="interleaver_seed", type=int)
    p.add_argument("--noise-seed", dest="noise_seed", type=int)
    p.add_argument("--min-errors", dest="min_errors", type=int)
    p.add_argument("--max-bits", dest="max_bits", type=float)

    p = add("spectrum", _cmd_spectrum, "distance spectrum under a table")
    p.add_argument("--q", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    p.add_argument("--table")
    p.add_argument("--bin-width", dest="bin_width", type=float)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
