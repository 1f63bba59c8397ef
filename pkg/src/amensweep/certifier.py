"""The diffusion pipeline: per-orbit measures on the eta = |c|/(2s)
schedule, verified norm halving, the geometric iteration, and emission and
replay of invisibility certificates.

A certificate records, for each step, the synthesized measures, the output
cycle, and an explicit bounding chain with boundary(b_i) = c_{i+1} - c_i;
all equalities are exact rationals and re-checkable from files alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from .action import GroupAction, bounding_chain, orbits
from .chains import Chain, chain_from_obj, chain_to_obj
from .diffusion import (AnyMeasure, Measure, ProductMeasure, diffuse,
                        measure_from_obj, measure_to_obj, synthesize_measure)
from .errors import CertificateError, DomainError
from .multicomplex import Multicomplex
from .serialize import frac_str, parse_frac, require

ZERO = Fraction(0)


# -- odd-stabilizer precondition ----------------------------------------------------

@dataclass(frozen=True)
class StabilizerReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_odd_stabilizers(G: GroupAction, c: Chain) -> StabilizerReport:
    """Confirm every simplex underlying supp(c) admits an orientation-
    reversing stabilizer in the (possibly windowed) closure."""
    from .action import stabilizer_sign_search
    if not c.is_alternating():
        raise DomainError("check_odd_stabilizers expects an alternating chain")
    if c.degree >= 1 and not c.is_cycle():
        raise DomainError("check_odd_stabilizers expects a cycle")
    bad = []
    for sid in sorted({sigma.simplex for sigma in c.support()}):
        g = stabilizer_sign_search(G, sid)
        if g is None:
            bad.append(sid)
    return StabilizerReport(tuple(bad))


# -- one halving step ------------------------------------------------------------------

@dataclass
class HalvingStep:
    index: int
    orbit_count: int
    eta: Fraction
    orbit_measures: list[AnyMeasure]
    cycle_in: Chain
    cycle_out: Chain
    bounding: Chain
    witness_bound: Fraction
    recorded_norms: dict | None = None

    def factor_count(self) -> int:
        return sum(len(_factors(mu)) for mu in self.orbit_measures)


def _factors(mu: AnyMeasure) -> tuple[Measure, ...]:
    if isinstance(mu, ProductMeasure):
        return mu.factors
    return (mu,)


def halve(G: GroupAction, c: Chain, *, max_factors: int = 4000,
          box_cap: int = 4096, _index: int = 0) -> HalvingStep:
    """Split supp(c) into orbit pieces, diffuse each below
    eta = |c|/(2 orbits) in sequence, and return the verified step with an
    explicit bounding chain telescoped from per-factor witnesses."""
    if c.is_zero():
        raise DomainError("halve needs a nonzero cycle")
    if not c.is_alternating():
        raise DomainError("halve needs an alternating chain")
    if not c.is_cycle():
        raise DomainError("halve needs a cycle")
    if G.witness_provider is None:
        raise DomainError("the action has no witness provider installed")
    stab = check_odd_stabilizers(G, c)
    if not stab.ok:
        raise DomainError(
            f"odd stabilizers missing for {', '.join(stab.violations)}")

    part = orbits(G, support=c.support())
    s = len(part.orbits)
    eta = c.l1_norm() / (2 * s)

    def orbit_root(sigma):
        # closed-form elements can land on states the generator-path search
        # never reached; explore on demand so every diffused simplex has a
        # component (new exploration may only merge existing components)
        if sigma not in part.membership:
            G._orbit_explore(sigma, strict=False)
        return G._orbit_find(sigma)

    current = c
    bounding = Chain.zero(c.complex, c.degree + 1)
    witness_bound = ZERO
    orbit_measures: list[AnyMeasure] = []
    for j, orbit in enumerate(part.orbits):
        ids = {orbit_root(sigma) for sigma in orbit}
        piece = current.restrict(
            [sigma for sigma in current.support()
             if orbit_root(sigma) in ids])
        if piece.is_zero():
            orbit_measures.append(Measure.dirac(G.identity()))
            continue
        mu_j = synthesize_measure(G, piece, eta, check_single_orbit=False,
                                  max_factors=max_factors, box_cap=box_cap)
        orbit_measures.append(mu_j)
        for nu in _factors(mu_j):
            step_b, step_bound = _factor_bounding(G, nu, current)
            bounding = bounding + step_b
            witness_bound += step_bound
            current = diffuse(nu, current)

    if current.l1_norm() > c.l1_norm() / 2:
        raise DomainError(
            f"halving not reached: {current.l1_norm()} > {c.l1_norm()}/2")
    if bounding.boundary() != current - c:
        raise DomainError("bounding chain failed its telescoped identity")
    if not current.is_alternating() or (not current.is_zero()
                                        and not current.is_cycle()):
        raise DomainError("diffused cycle lost alternation or cycle property")
    return HalvingStep(_index, s, eta, orbit_measures, c, current, bounding,
                       witness_bound)


def _factor_bounding(G: GroupAction, nu: Measure,
                     x: Chain) -> tuple[Chain, Fraction]:
    """b = sum_g nu(g) h_g(x) with boundary(b) = nu*x - x, plus the additive
    witness bound sum_g nu(g) B_g."""
    from .diffusion import PowerMeasure
    if isinstance(nu, PowerMeasure):
        return _power_bounding(G, nu, x)
    b = Chain.zero(x.complex, x.degree + 1)
    bound = ZERO
    for g, w in nu.items():
        if g.key() == "__identity__":
            continue
        witness = G.witness_provider(g)
        b = b + w * bounding_chain(witness, x)
        bound += w * witness.bound
    return b, bound


def _power_bounding(G: GroupAction, nu, x: Chain) -> tuple[Chain, Fraction]:
    """Telescoped bounding chain for a measure on powers of one direction:
    with boundary(h) = r.x - x,

        r^k x - x = boundary( sum_{l=0}^{k-1} r^l h )        for k >= 0,
        r^k x - x = boundary( -sum_{l=1}^{|k|} r^-l h )      for k < 0,

    so only the single witness of r is needed."""
    from .action import apply
    r = nu.direction
    witness = G.witness_provider(r)
    base = bounding_chain(witness, x)
    coef: dict[int, Fraction] = {}
    bound = ZERO
    for k, w in zip(nu.exponents, nu.power_weights):
        bound += w * abs(k) * witness.bound
        if k > 0:
            for l in range(k):
                coef[l] = coef.get(l, ZERO) + w
        elif k < 0:
            for l in range(-1, k - 1, -1):
                coef[l] = coef.get(l, ZERO) - w
    acc: dict = {}

    def accumulate(chain: Chain, weight: Fraction):
        for sigma, v in chain.items():
            s = acc.get(sigma, ZERO) + weight * v
            if s == 0:
                acc.pop(sigma, None)
            else:
                acc[sigma] = s

    cur = base
    for l in range(0, max(coef, default=-1) + 1):
        if l > 0:
            cur = apply(r, cur)
        if l in coef:
            accumulate(cur, coef[l])
    cur = base
    r_inv = r.inverse()
    for l in range(-1, min(coef, default=1) - 1, -1):
        cur = apply(r_inv, cur)
        if l in coef:
            accumulate(cur, coef[l])
    return Chain(x.complex, x.degree + 1, _trusted=acc), bound


# -- certificates --------------------------------------------------------------------------

@dataclass
class Certificate:
    degree: int
    steps_requested: int
    initial_cycle: Chain
    steps: list[HalvingStep]
    partial_bounding: Chain
    residual: Chain
    residual_bound: Fraction
    instance_hashes: dict[str, str] | None = None
    verified: bool = field(default=False, compare=False)

    @property
    def steps_done(self) -> int:
        return len(self.steps)


def certify(G: GroupAction, c: Chain, steps: int, *,
            instance_hashes: dict[str, str] | None = None,
            max_factors: int = 4000, box_cap: int = 4096,
            progress=None) -> Certificate:
    """Iterate the halving step, stopping early on an exact zero, and
    assemble the certificate with its norm ledger."""
    if steps < 0:
        raise DomainError("step count must be nonnegative")
    if c.degree < 1:
        raise DomainError("certification needs degree >= 1 (bounding "
                          "chains live one degree up)")
    if not c.is_alternating():
        raise DomainError("certify expects an alternating cycle; apply alt")
    if not c.is_zero() and not c.is_cycle():
        raise DomainError("certify expects a cycle")
    current = c
    out: list[HalvingStep] = []
    bounding = Chain.zero(c.complex, c.degree + 1)
    for i in range(steps):
        if current.is_zero():
            break
        step = halve(G, current, max_factors=max_factors, box_cap=box_cap,
                     _index=i)
        out.append(step)
        bounding = bounding + step.bounding
        current = step.cycle_out
        if progress is not None:
            progress(step)
    cert = Certificate(
        degree=c.degree,
        steps_requested=steps,
        initial_cycle=c,
        steps=out,
        partial_bounding=bounding,
        residual=current,
        residual_bound=current.l1_norm(),
        instance_hashes=instance_hashes,
    )
    cert.verified = True  # constructed with every equality checked
    return cert


def seminorm_bound_from_certificate(cert: Certificate) -> Fraction:
    """|c_N|: an upper bound for the quotient seminorm of [c_0], since the
    residual represents the same class."""
    if not cert.verified:
        raise CertificateError("certificate has not been verified")
    return cert.residual_bound


# -- verification ----------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationFailure:
    location: str
    detail: str

    def __str__(self):
        return f"{self.location}: {self.detail}"


@dataclass(frozen=True)
class VerificationReport:
    failures: tuple[VerificationFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(str(f) for f in self.failures)


def verify_certificate(cert: Certificate, G: GroupAction, *,
                       complex_bytes: bytes | None = None,
                       action_bytes: bytes | None = None,
                       max_failures: int = 8) -> VerificationReport:
    """Re-check every certificate equality exactly: hashes, measure
    validity, per-step boundary identities, norm bounds, and the assembled
    partial bounding chain."""
    from .serialize import sha256_bytes
    failures: list[VerificationFailure] = []

    def fail(location: str, detail: str) -> bool:
        failures.append(VerificationFailure(location, detail))
        return len(failures) >= max_failures

    if cert.instance_hashes is not None:
        for name, data in (("complex", complex_bytes),
                           ("action", action_bytes)):
            want = cert.instance_hashes.get(name)
            if want is None:
                continue
            if data is None:
                if fail(f"hash:{name}", "no bytes supplied to check against"):
                    return _done(cert, failures)
            elif sha256_bytes(data) != want:
                if fail(f"hash:{name}",
                        f"sha256 mismatch (expected {want[:12]}...)"):
                    return _done(cert, failures)

    c0 = cert.initial_cycle
    norm0 = c0.l1_norm()
    if not c0.is_alternating() or (not c0.is_zero() and not c0.is_cycle()):
        fail("initial cycle", "not an alternating cycle")

    for pos, st in enumerate(cert.steps):
        if st.index != pos:
            fail(f"step {st.index}", f"out-of-order step (expected {pos})")
            return _done(cert, failures)

    chains = [c0] + [st.cycle_out for st in cert.steps]
    total_b = Chain.zero(c0.complex, c0.degree + 1)
    for st in cert.steps:
        loc = f"step {st.index}"
        for mu in st.orbit_measures:
            for nu in _factors(mu):
                try:
                    _check_measure(nu)
                except DomainError as exc:
                    if fail(loc, f"invalid measure: {exc}"):
                        return _done(cert, failures)
        cin, cout = chains[st.index], chains[st.index + 1]
        if st.cycle_in != cin:
            fail(loc, "recorded input cycle disagrees with the chain")
        if not cout.is_alternating() or (not cout.is_zero()
                                         and not cout.is_cycle()):
            fail(loc, "output is not an alternating cycle")
        diff = st.bounding.boundary() - (cout - cin)
        if not diff.is_zero():
            sigma = diff.support()[0]
            if fail(loc, f"boundary identity fails at {sigma}"):
                return _done(cert, failures)
        if cout.l1_norm() > cin.l1_norm() / 2:
            fail(loc, "halving bound fails")
        if cout.l1_norm() > norm0 / (2 ** (st.index + 1)):
            fail(loc, "geometric envelope fails")
        if st.bounding.l1_norm() > st.witness_bound * cin.l1_norm():
            fail(loc, "bounding norm exceeds its witness bound")
        if st.recorded_norms is not None:
            for name, chain in (("cycle_in", cin), ("cycle_out", cout),
                                ("bounding", st.bounding)):
                if st.recorded_norms.get(name) != chain.l1_norm():
                    fail(loc, f"recorded {name} norm does not match the "
                              f"chain")
        total_b = total_b + st.bounding

    if total_b != cert.partial_bounding:
        fail("partial bounding chain", "does not equal the sum of steps")
    diff = cert.partial_bounding.boundary() - (cert.residual - c0)
    if not diff.is_zero():
        sigma = diff.support()[0]
        fail("partial bounding chain", f"boundary identity fails at {sigma}")
    if cert.steps and cert.residual != cert.steps[-1].cycle_out:
        fail("residual", "does not equal the last step's output")
    if not cert.steps and cert.residual != c0:
        fail("residual", "empty certificate must carry the initial cycle")
    if cert.residual_bound < cert.residual.l1_norm():
        fail("residual bound", "below the residual's actual norm")
    if cert.residual_bound > norm0 / (2 ** cert.steps_requested):
        fail("residual bound", "above the 2^-N envelope")
    if cert.steps_done < cert.steps_requested and not cert.residual.is_zero():
        fail("residual", "early stop without an exactly zero residual")
    return _done(cert, failures)


def _done(cert: Certificate, failures) -> VerificationReport:
    report = VerificationReport(tuple(failures))
    cert.verified = report.ok
    return report


def _check_measure(nu: Measure):
    total = sum(nu.weights, ZERO)
    if total != 1:
        raise DomainError(f"weights sum to {total}")
    if any(w <= 0 for w in nu.weights):
        raise DomainError("nonpositive weight")
    keys = {g.key() for g in nu.elements}
    if len(keys) != len(nu.elements):
        raise DomainError("repeated support element")


# -- file format -------------------------------------------------------------------------------

FORMAT = "amensweep-certificate/1"
_EXPLICIT_CAP = 128


def _measure_obj(mu: AnyMeasure) -> dict:
    factors = [measure_to_obj(nu) for nu in _factors(mu)]
    explicit = None
    if isinstance(mu, Measure):
        explicit = measure_to_obj(mu)
    elif mu.support_size_bound() <= _EXPLICIT_CAP:
        explicit = measure_to_obj(mu.explicit(_EXPLICIT_CAP))
    return {"factors": factors, "explicit": explicit}


def _measure_from(obj, G: GroupAction) -> AnyMeasure:
    require(isinstance(obj, dict) and "factors" in obj,
            "measure record needs 'factors'")
    factors = [measure_from_obj(rec, G) for rec in obj["factors"]]
    if len(factors) == 1:
        return factors[0]
    return ProductMeasure(tuple(factors))


def certificate_to_obj(cert: Certificate) -> dict:
    if cert.instance_hashes is None:
        raise CertificateError(
            "cannot serialize a certificate without instance hashes")
    return {
        "format": FORMAT,
        "instance": dict(sorted(cert.instance_hashes.items())),
        "degree": cert.degree,
        "steps_requested": cert.steps_requested,
        "initial_cycle": chain_to_obj(cert.initial_cycle),
        "steps": [{
            "index": st.index,
            "orbit_count": st.orbit_count,
            "eta": frac_str(st.eta),
            "orbit_measures": [_measure_obj(mu) for mu in st.orbit_measures],
            "cycle_out": chain_to_obj(st.cycle_out),
            "bounding_chain": chain_to_obj(st.bounding),
            "norms": {
                "cycle_in": frac_str(st.cycle_in.l1_norm()),
                "cycle_out": frac_str(st.cycle_out.l1_norm()),
                "bounding": frac_str(st.bounding.l1_norm()),
                "witness_bound": frac_str(st.witness_bound),
            },
        } for st in cert.steps],
        "partial_bounding_chain": chain_to_obj(cert.partial_bounding),
        "residual_cycle": chain_to_obj(cert.residual),
        "residual_bound": frac_str(cert.residual_bound),
        "ledger": {
            "step_bounding_norms": [frac_str(st.bounding.l1_norm())
                                    for st in cert.steps],
            "total_bounding_norm": frac_str(
                sum((st.bounding.l1_norm() for st in cert.steps), ZERO)),
            "max_witness_bound": frac_str(
                max((st.witness_bound for st in cert.steps), default=ZERO)),
            "factor_counts": [st.factor_count() for st in cert.steps],
        },
    }


def certificate_from_obj(obj, K: Multicomplex, G: GroupAction) -> Certificate:
    require(isinstance(obj, dict), "certificate must be a JSON object")
    require(obj.get("format") == FORMAT,
            f"unknown certificate format {obj.get('format')!r}")
    for k in ("instance", "degree", "steps_requested", "initial_cycle",
              "steps", "partial_bounding_chain", "residual_cycle",
              "residual_bound"):
        require(k in obj, f"certificate missing {k!r}")
    degree = int(obj["degree"])
    c0 = chain_from_obj(obj["initial_cycle"], K, degree)
    steps: list[HalvingStep] = []
    prev = c0
    for rec in obj["steps"]:
        for k in ("index", "orbit_count", "eta", "orbit_measures",
                  "cycle_out", "bounding_chain", "norms"):
            require(k in rec, f"step record missing {k!r}")
        cout = chain_from_obj(rec["cycle_out"], K, degree)
        bnd = chain_from_obj(rec["bounding_chain"], K, degree + 1)
        measures = [_measure_from(m, G) for m in rec["orbit_measures"]]
        steps.append(HalvingStep(
            index=int(rec["index"]),
            orbit_count=int(rec["orbit_count"]),
            eta=parse_frac(rec["eta"]),
            orbit_measures=measures,
            cycle_in=prev,
            cycle_out=cout,
            bounding=bnd,
            witness_bound=parse_frac(rec["norms"]["witness_bound"]),
            recorded_norms={k: parse_frac(v)
                            for k, v in rec["norms"].items()},
        ))
        prev = cout
    return Certificate(
        degree=degree,
        steps_requested=int(obj["steps_requested"]),
        initial_cycle=c0,
        steps=steps,
        partial_bounding=chain_from_obj(obj["partial_bounding_chain"], K,
                                        degree + 1),
        residual=chain_from_obj(obj["residual_cycle"], K, degree),
        residual_bound=parse_frac(obj["residual_bound"]),
        instance_hashes=dict(obj["instance"]),
    )
