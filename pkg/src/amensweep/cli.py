"""Command-line interface.

Machine-readable JSON lines go to standard output; human summaries go to
standard error.  Exit codes: 0 success, 1 domain failure, 2 file/format
problem, 3 window exhaustion.  All numbers print as exact rationals
("p/q"); --decimal adds a clearly approximate 6-digit rendering.
"""

from __future__ import annotations

import functools
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import click

from . import models
from .action import action_from_obj, action_to_obj, validate_automorphism
from .certifier import (certificate_from_obj, certificate_to_obj, certify,
                        verify_certificate)
from .chains import chain_from_obj, chain_to_obj
from .cover import (barycentric_subdivide, cover_from_obj, cover_to_obj,
                    find_coloring, multiplicity)
from .errors import (AmensweepError, DomainError, FormatError,
                     WindowExhausted)
from .homology_lp import seminorm_lp
from .models import witness_from_word
from .multicomplex import complex_to_obj, load_complex
from .serialize import (canonical_dumps, dump_json, frac_str, load_json,
                        sha256_file)

EXIT_DOMAIN = 1
EXIT_FORMAT = 2
EXIT_WINDOW = 3


def emit(command: str, inputs: dict, results: dict, started: float,
         decimal: bool = False):
    if decimal:
        results = dict(results)
        approx = {}
        for key, value in list(results.items()):
            try:
                approx[key] = round(float(Fraction(value)), 6)
            except (ValueError, TypeError, ZeroDivisionError):
                continue
        if approx:
            results["approx(decimal, inexact)"] = approx
    record = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "elapsed_s": round(time.time() - started, 3),
    }
    click.echo(canonical_dumps(record))


def info(message: str):
    click.echo(message, err=True)


def run_guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FileNotFoundError as exc:
            info(f"error: missing file: {exc}")
            sys.exit(EXIT_FORMAT)
        except FormatError as exc:
            info(f"error: bad file: {exc}")
            sys.exit(EXIT_FORMAT)
        except WindowExhausted as exc:
            detail = f" (element {exc.element})" if exc.element else ""
            info(f"error: window exhausted: {exc}{detail}")
            sys.exit(EXIT_WINDOW)
        except (DomainError, AmensweepError) as exc:
            info(f"error: {exc}")
            sys.exit(EXIT_DOMAIN)
    return wrapper


def _load_instance(complex_path: str, action_path: str | None):
    K = load_complex(complex_path)
    G = witnesses = None
    if action_path is not None:
        G, witness_list = action_from_obj(load_json(action_path), K)
        witnesses = {w.label: w for w in witness_list}
        if witnesses:
            G.witness_provider = lambda g: witness_from_word(
                G, witnesses, g.word)
    return K, G, witnesses


class AliasedGroup(click.Group):
    ALIASES = {"gen-example": "gen"}

    def get_command(self, ctx, cmd_name):
        return super().get_command(ctx, self.ALIASES.get(cmd_name, cmd_name))


@click.group(cls=AliasedGroup)
@click.version_option()
def main():
    """Diffusion of alternating cycles on multicomplexes, with
    machine-checkable invisibility certificates."""


@main.command()
@click.argument("complex_path", metavar="COMPLEX")
@click.option("--action", "action_path", default=None,
              help="action file to validate against the complex")
@click.option("--cycle", "cycle_path", default=None,
              help="chain file to validate as a cycle on the complex")
@run_guarded
def validate(complex_path, action_path, cycle_path):
    """Check instance files: complex invariants, automorphism and witness
    data, cycle membership."""
    started = time.time()
    K, G, witnesses = _load_instance(complex_path, action_path)
    report = K.validate()
    problems = [str(v) for v in report.violations]
    if G is not None:
        for label, g in G.generators:
            for issue in validate_automorphism(K, g):
                problems.append(f"generator {label}: {issue}")
        for label, w in sorted((witnesses or {}).items()):
            failure = w.verify()
            if failure is not None:
                problems.append(f"witness {label}: {failure}")
    if cycle_path is not None:
        c = chain_from_obj(load_json(cycle_path), K)
        if c.degree >= 1 and not c.is_cycle():
            problems.append("cycle file: not a cycle")
    emit("validate", {"complex": sha256_file(complex_path)},
         {"ok": not problems, "problems": problems}, started)
    if problems:
        info("validation failed:")
        for p in problems:
            info(f"  - {p}")
        sys.exit(EXIT_DOMAIN)
    info("validation ok")


@main.command()
@click.argument("complex_path", metavar="COMPLEX")
@click.argument("cycle_path", metavar="CYCLE")
@click.option("--minimizer-out", default=None,
              help="write the minimizing bounding chain to this file")
@click.option("--decimal", is_flag=True, help="add approximate decimals")
@run_guarded
def seminorm(complex_path, cycle_path, minimizer_out, decimal):
    """Exact LP value of the quotient seminorm of the cycle's class."""
    started = time.time()
    K = load_complex(complex_path)
    z = chain_from_obj(load_json(cycle_path), K)
    if z.degree >= 1 and not z.is_cycle():
        info("error: input chain is not a cycle")
        sys.exit(EXIT_DOMAIN)
    res = seminorm_lp(K, z)
    results = {"seminorm": frac_str(res.value),
               "cycle_norm": frac_str(z.l1_norm()),
               "minimizer_terms": len(res.minimizer)}
    if minimizer_out:
        dump_json(chain_to_obj(res.minimizer), minimizer_out)
        results["minimizer_path"] = str(minimizer_out)
    emit("seminorm", {"complex": sha256_file(complex_path),
                      "cycle": sha256_file(cycle_path)},
         results, started, decimal)
    info(f"seminorm = {frac_str(res.value)}")


@main.command(name="certify")
@click.argument("complex_path", metavar="COMPLEX")
@click.argument("action_path", metavar="ACTION")
@click.argument("cycle_path", metavar="CYCLE")
@click.option("--steps", "-n", type=int, required=True,
              help="halving steps to run")
@click.option("--out", "out_path", required=True,
              help="where to write the certificate JSON")
@click.option("--report-dir", default=None,
              help="also render figures and CSV into this directory")
@click.option("--decimal", is_flag=True)
@run_guarded
def certify_cmd(complex_path, action_path, cycle_path, steps, out_path,
                report_dir, decimal):
    """Run the diffusion pipeline and write an invisibility certificate."""
    started = time.time()
    K, G, witnesses = _load_instance(complex_path, action_path)
    if G is None or not witnesses:
        info("error: certification needs an action file with witnesses")
        sys.exit(EXIT_DOMAIN)
    c = chain_from_obj(load_json(cycle_path), K)
    if not c.is_alternating():
        c = c.alt()
        info("note: input was not alternating; certified alt(c) instead")
    hashes = {"complex": sha256_file(complex_path),
              "action": sha256_file(action_path)}
    cert = certify(G, c, steps, instance_hashes=hashes)
    dump_json(certificate_to_obj(cert), out_path)
    results = {
        "certificate": str(out_path),
        "steps_done": cert.steps_done,
        "initial_norm": frac_str(c.l1_norm()),
        "residual_bound": frac_str(cert.residual_bound),
        "envelope": frac_str(c.l1_norm() / (2 ** steps)),
    }
    if report_dir:
        from .report import render_report
        results["report_files"] = render_report(cert, report_dir)
    emit("certify", hashes, results, started, decimal)
    info(f"residual bound {frac_str(cert.residual_bound)} after "
         f"{cert.steps_done} step(s); certificate at {out_path}")


@main.command(name="verify")
@click.argument("cert_path", metavar="CERTIFICATE")
@click.argument("complex_path", metavar="COMPLEX")
@click.argument("action_path", metavar="ACTION")
@run_guarded
def verify_cmd(cert_path, complex_path, action_path):
    """Replay a certificate's equalities from files alone."""
    started = time.time()
    K, G, _ = _load_instance(complex_path, action_path)
    obj = load_json(cert_path)
    want = obj.get("instance", {})
    got = {"complex": sha256_file(complex_path),
           "action": sha256_file(action_path)}
    if want != got:
        emit("verify", got, {"ok": False,
                             "failures": ["instance hash mismatch"]}, started)
        info("hash mismatch: certificate does not bind to these files")
        sys.exit(EXIT_FORMAT)
    cert = certificate_from_obj(obj, K, G)
    cbytes = Path(complex_path).read_bytes()
    abytes = Path(action_path).read_bytes()
    report = verify_certificate(cert, G, complex_bytes=cbytes,
                                action_bytes=abytes)
    emit("verify", got, {"ok": report.ok,
                         "failures": [str(f) for f in report.failures]},
         started)
    if not report.ok:
        info("verification FAILED:")
        for f in report.failures:
            info(f"  - {f}")
        sys.exit(EXIT_DOMAIN)
    info("certificate ok")


@main.command(name="cover")
@click.argument("complex_path", metavar="COMPLEX")
@click.argument("cover_path", metavar="COVER")
@click.option("--subdivide", is_flag=True,
              help="barycentrically subdivide once before coloring")
@click.option("--pullback", type=click.Choice(["closed", "open"]),
              default="closed", show_default=True)
@click.option("--decimal", is_flag=True)
@run_guarded
def cover_cmd(complex_path, cover_path, subdivide, pullback, decimal):
    """Cover multiplicity, star-condition coloring, and class sizes."""
    started = time.time()
    T = load_complex(complex_path)
    C = cover_from_obj(load_json(cover_path))
    inputs = {"complex": sha256_file(complex_path),
              "cover": sha256_file(cover_path)}
    if subdivide:
        sub = barycentric_subdivide(T)
        T = sub.complex
        C = sub.pullback(C, rule=pullback)
    mult = multiplicity(C)
    col = find_coloring(T, C)
    results = {"multiplicity": mult, "amenable": C.all_amenable(),
               "subdivided": bool(subdivide)}
    if col is None:
        results["coloring"] = None
        results["advice"] = ("no admissible coloring; subdivide " +
                             "(open-set pullback) or refine the cover")
        emit("cover", inputs, results, started, decimal)
        info(f"multiplicity {mult}; no coloring found - consider "
             f"--subdivide --pullback open")
        sys.exit(EXIT_DOMAIN)
    classes = col.vertex_classes()
    results["coloring"] = dict(sorted(col.assignment.items()))
    results["class_sizes"] = {k: len(v) for k, v in sorted(classes.items())}
    emit("cover", inputs, results, started, decimal)
    info(f"multiplicity {mult}; coloring found with class sizes "
         f"{results['class_sizes']}")


@main.command(name="gen")
@click.argument("model", type=click.Choice(["circle", "synthetic",
                                            "cover-demo"]))
@click.option("--out", "out_dir", required=True)
@click.option("--m", "m", type=int, default=3, show_default=True,
              help="circle: marked vertices")
@click.option("--window", "-w", default="6", show_default=True,
              help="circle: winding window (rational)")
@click.option("--seed", type=int, default=0, show_default=True,
              help="synthetic: RNG seed")
@click.option("--n", "n_gon", type=int, default=6, show_default=True,
              help="cover-demo: cycle length")
@click.option("--with-witnesses/--no-witnesses", default=True,
              show_default=True)
@run_guarded
def gen_cmd(model, out_dir, m, window, seed, n_gon, with_witnesses):
    """Generate instance files for a model (alias: gen-example)."""
    started = time.time()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if model == "circle":
        bundle = models.gen_circle_model(m, Fraction(window))
        witnesses = list(bundle.witnesses.values()) if with_witnesses else ()
        files = _write_instance(out, bundle.complex, bundle.action,
                                witnesses, bundle.cycle)
    elif model == "synthetic":
        inst = models.gen_synthetic(seed)
        witnesses = list(inst.witnesses.values()) if with_witnesses else ()
        files = _write_instance(out, inst.complex, inst.action, witnesses,
                                inst.cycle)
    else:
        T, C = _cover_demo(n_gon)
        files = {
            "complex": str(out / "complex.json"),
            "cover": str(out / "cover.json"),
        }
        dump_json(complex_to_obj(T), files["complex"])
        dump_json(cover_to_obj(C), files["cover"])
    emit("gen", {"model": model}, {"files": files}, started)
    info(f"wrote {', '.join(sorted(files.values()))}")


def _write_instance(out: Path, K, G, witnesses, cycle) -> dict:
    files = {
        "complex": str(out / "complex.json"),
        "action": str(out / "action.json"),
        "cycle": str(out / "cycle.json"),
    }
    # the action tables and witness images may materialize lazy simplices;
    # build them first so the complex file contains everything referenced
    action_obj = action_to_obj(G, witnesses)
    dump_json(complex_to_obj(K), files["complex"])
    dump_json(action_obj, files["action"])
    dump_json(chain_to_obj(cycle), files["cycle"])
    return files


def _cover_demo(n: int):
    from .cover import Cover, CoverMember
    from .multicomplex import simplicial_from_top
    names = [f"p{i}" for i in range(n)]
    T = simplicial_from_top([(names[i], names[(i + 1) % n])
                             for i in range(n)])
    half = n // 2 + 1
    arc1 = names[:half + 1]
    arc2 = names[half:] + [names[0]]
    C = Cover([CoverMember("U0", frozenset(arc1), True),
               CoverMember("U1", frozenset(arc2), True)])
    return T, C


@main.command(name="report")
@click.argument("cert_path", metavar="CERTIFICATE")
@click.argument("complex_path", metavar="COMPLEX")
@click.argument("action_path", metavar="ACTION")
@click.option("--out", "out_dir", required=True)
@run_guarded
def report_cmd(cert_path, complex_path, action_path, out_dir):
    """Render a certificate's norm ledger: CSV plus figures."""
    started = time.time()
    K, G, _ = _load_instance(complex_path, action_path)
    cert = certificate_from_obj(load_json(cert_path), K, G)
    from .report import render_report
    files = render_report(cert, out_dir)
    emit("report", {"certificate": sha256_file(cert_path)},
         {"files": files}, started)
    info(f"report written to {out_dir}")


if __name__ == "__main__":
    main()
