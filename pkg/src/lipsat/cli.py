"""Run a session file and print one verdict document per check.

Exit codes: 0 when every check ran (whatever its verdict), 1 on an input
error, 2 when the inclusion chain was violated (an internal soundness bug).
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click

from .arcs import DEFAULT_TRUNC, TruncationInsufficient
from .closure import Proved, Refuted, SearchBounds, Unknown
from .dsl import Command, ElemDecl, RingDecl, Session, SessionError, build, parse
from .ideal import Ideal, ideal_member_trace, radical_member
from .sampler import DEFAULT_SCALES, DegenerateSample, EpsilonLadder, sample_ideal_ratio, sample_lipschitz_ratio
from .saturation import (
    InconsistentChain,
    InconsistentRepresentation,
    NotDominant,
    SaturationQuery,
    constant_on_fibers,
    integrality,
    lipschitz_member,
    lipschitz_seminormalization_member,
    saturation_member,
    saturation_witness,
    seminormalization_member,
    tensor_of,
)
from .serialize import certificate_to_json, poly_to_json, rational, witness_to_json
from .variety import diff_element

EXIT_OK, EXIT_INPUT, EXIT_UNSOUND = 0, 1, 2


@dataclass(frozen=True)
class RunOptions:
    max_relation_degree: int = 4
    max_cofactor_degree: int = 6
    trunc: int = DEFAULT_TRUNC
    seed: int = 0
    scales: Tuple[Fraction, ...] = DEFAULT_SCALES
    samples: int = 64
    arcs: str = "standard"

    def bounds(self) -> SearchBounds:
        return SearchBounds(self.max_relation_degree, self.max_cofactor_degree)

    def ladder(self) -> EpsilonLadder:
        return EpsilonLadder(self.scales, self.samples, self.seed)

    def with_flags(self, flags) -> "RunOptions":
        upd = {}
        for k, v in flags:
            if k == "ideal":
                continue
            if k == "arcs":
                if v not in ("standard", "none"):
                    raise ValueError(f"arcs must be standard or none, not {v!r}")
                upd[k] = v
            else:
                if not isinstance(v, Fraction) or v.denominator != 1:
                    raise ValueError(f"flag {k} needs an integer, got {v}")
                upd[k] = int(v)
        return replace(self, **upd)


@dataclass
class VerdictDocument:
    command: str
    kind: str
    verdict: Optional[str]
    bounds: Dict[str, int]
    seconds: float
    certificate: Optional[Dict[str, Any]] = None
    witness: Optional[Dict[str, Any]] = None
    report: Optional[Dict[str, Any]] = None
    note: Optional[str] = None
    error: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        out = {
            "command": self.command,
            "kind": self.kind,
            "verdict": self.verdict,
            "bounds": self.bounds,
            "timing": {"seconds": self.seconds},
        }
        for key in ("certificate", "witness", "report", "note", "error"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out

    def text(self) -> str:
        line = f"{self.command} -> {self.verdict or 'error'}"
        if self.certificate and "n" in self.certificate:
            line += f" (n={self.certificate['n']})"
        if self.witness and self.witness.get("kind") == "arc":
            w = self.witness
            line += f" (arc {w['label']}: orders {w['target_order']} < {w['ideal_order']})"
        elif self.witness and self.witness.get("kind") == "point":
            pt = ", ".join(_frac_text(v) for v in self.witness["point"])
            line += f" (point {pt})"
        elif self.witness:
            line += f" ({self.witness['kind']} witness)"
        if self.report:
            line += f" [hint {self.report['verdict_hint']}, exponent {self.report['growth_exponent_estimate']:.2f}]"
        if self.error:
            line += f": {self.error}"
        return line + f"  [{self.seconds:.2f}s]"


def _frac_text(d):
    return d["num"] if d["den"] == "1" else f"{d['num']}/{d['den']}"


class _Context:
    def __init__(self, session: Session, options: RunOptions):
        self.session = session
        self.options = options
        self._built = {}

    def built(self, trunc):
        if trunc not in self._built:
            self._built[trunc] = build(self.session, trunc)
        return self._built[trunc]


def _verdict_fields(v, z=None, gens=(), ambient=None):
    if isinstance(v, Proved):
        return "proved", certificate_to_json(v.certificate, z, gens, ambient), None
    if isinstance(v, Refuted):
        return "refuted", None, witness_to_json(v.witness)
    return "unknown", None, None


def _query(ctx, cmd: Command, opts: RunOptions) -> SaturationQuery:
    built = ctx.built(opts.trunc)
    m = built.maps[cmd.target]
    decl = ctx.session.declarations[cmd.element]
    tgt = ctx.session.declarations[ctx.session.declarations[cmd.target].target]
    owner = ctx.session.declarations[decl.owner]
    owner_ring = owner.name if isinstance(owner, RingDecl) else owner.target
    if owner_ring != tgt.name:
        raise ValueError(f"element {decl.name} lives in {owner_ring}, not in the target {tgt.name} of {cmd.target}")
    branches = tuple(built.branches[b.name] for b in ctx.session.branches_on(tgt.name))
    return SaturationQuery(m, decl.value, bounds=opts.bounds(), branches=branches,
                           arc_mode=opts.arcs, representation=decl.representation)


def execute(ctx: _Context, cmd: Command) -> VerdictDocument:
    opts = ctx.options.with_flags(cmd.flags)
    bounds = {"max_relation_degree": opts.max_relation_degree,
              "max_cofactor_degree": opts.max_cofactor_degree, "trunc": opts.trunc}
    doc = VerdictDocument(cmd.echo(), cmd.kind, None, bounds, 0.0)
    t0 = time.perf_counter()
    kind = cmd.kind
    if kind == "dominant":
        m = ctx.built(opts.trunc).maps[cmd.target]
        doc.verdict = "true" if m.dominant else "false"
        if not m.dominant:
            doc.witness = {"kind": "kernel", "generators": [poly_to_json(g) for g in m.kernel.generators]}
    elif kind in ("member", "radical-member", "sample-ideal") and isinstance(
            ctx.session.declarations[cmd.target], RingDecl):
        _ring_command(ctx, cmd, opts, doc)
    else:
        q = _query(ctx, cmd, opts)
        if kind == "lipschitz":
            t = tensor_of(q.morphism)
            z = diff_element(t, q.element)
            v = lipschitz_member(q)
            if isinstance(v, Proved) and not saturation_member(q):
                raise InconsistentChain(f"{cmd.echo()} proved but outside the saturation")
            doc.verdict, doc.certificate, doc.witness = _verdict_fields(
                v, z, t.phi_kernel.generators, t.ring.defining.generators)
            if isinstance(v, Unknown):
                doc.note = v.note
        elif kind in ("saturation", "radical-member", "fibers"):
            ok = constant_on_fibers(q.morphism, q.element) if kind == "fibers" else saturation_member(q)
            doc.verdict = "true" if ok else "false"
            if not ok:
                w = saturation_witness(q)
                if w is not None:
                    doc.witness = witness_to_json(w)
        elif kind == "member":
            t = tensor_of(q.morphism)
            tr = ideal_member_trace(diff_element(t, q.element), t.total)
            doc.verdict = "true" if tr.member else "false"
            if tr.member:
                doc.certificate = certificate_to_json(tr)
        elif kind == "integral":
            doc.verdict, doc.certificate, doc.witness = _verdict_fields(integrality(q))
        elif kind == "seminormal":
            doc.verdict, doc.certificate, doc.witness = _verdict_fields(seminormalization_member(q))
        elif kind == "lipschitz-seminormal":
            doc.verdict, doc.certificate, doc.witness = _verdict_fields(lipschitz_seminormalization_member(q))
        elif kind == "sample-lipschitz":
            r = sample_lipschitz_ratio(q, q.branches, opts.ladder())
            doc.verdict = "unknown"
            doc.report = r.to_dict()
            doc.note = "numeric hint only"
        else:  # pragma: no cover - the parser rejects other kinds
            raise ValueError(f"unsupported check {kind}")
    doc.seconds = round(time.perf_counter() - t0, 4)
    return doc


def _ring_command(ctx, cmd, opts, doc):
    built = ctx.built(opts.trunc)
    ring_decl = ctx.session.declarations[cmd.target]
    ring = built.rings[ring_decl.name]
    p = ctx.session.declarations[cmd.element].value
    gens = list(cmd.flag("ideal"))
    ideal = Ideal(gens + list(ring.defining.generators), ring.variables)
    if cmd.kind == "member":
        tr = ideal_member_trace(p, ideal)
        doc.verdict = "true" if tr.member else "false"
        if tr.member:
            doc.certificate = certificate_to_json(tr)
    elif cmd.kind == "radical-member":
        doc.verdict = "true" if radical_member(p, ideal) else "false"
    else:
        branches = [built.branches[b.name] for b in ctx.session.branches_on(ring_decl.name)]
        r = sample_ideal_ratio(p, gens, branches, opts.ladder())
        doc.verdict = "unknown"
        doc.report = r.to_dict()
        doc.note = "numeric hint only"


def run(session: Session, options: RunOptions = RunOptions()) -> Tuple[List[VerdictDocument], int]:
    """Execute every command in order; returns the documents and the exit code."""
    ctx = _Context(session, options)
    docs: List[VerdictDocument] = []
    code = EXIT_OK
    for cmd in session.commands:
        try:
            docs.append(execute(ctx, cmd))
        except InconsistentChain as e:
            docs.append(VerdictDocument(cmd.echo(), cmd.kind, None, {}, 0.0, error=f"soundness violation: {e}"))
            return docs, EXIT_UNSOUND
        except (NotDominant, InconsistentRepresentation, DegenerateSample, TruncationInsufficient,
                ValueError, ZeroDivisionError) as e:
            docs.append(VerdictDocument(cmd.echo(), cmd.kind, None, {}, 0.0, error=str(e)))
            code = EXIT_INPUT
    return docs, code


def render(docs: Sequence[VerdictDocument], fmt: str = "json") -> str:
    if fmt == "text":
        return "\n".join(d.text() for d in docs)
    return json.dumps([d.to_json() for d in docs], indent=2)


def _scales(text: Optional[str]):
    if not text:
        return DEFAULT_SCALES
    return tuple(Fraction(s.strip()) for s in text.split(",") if s.strip())


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("session_file", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--max-relation-degree", default=4, show_default=True, type=int)
@click.option("--max-cofactor-degree", default=6, show_default=True, type=int)
@click.option("--trunc", default=DEFAULT_TRUNC, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--scales", default=None, help="comma separated, decreasing (default 1e-1,...,1e-6)")
@click.option("--samples", default=64, show_default=True, type=int)
@click.option("--format", "fmt", default="json", show_default=True, type=click.Choice(["json", "text"]))
@click.option("--arcs", default="standard", show_default=True, type=click.Choice(["standard", "none"]))
@click.option("--print-session", is_flag=True, help="echo the normalized session instead of running it")
def main(session_file, max_relation_degree, max_cofactor_degree, trunc, seed, scales, samples, fmt, arcs,
         print_session):
    """Check membership queries declared in SESSION_FILE."""
    try:
        with click.open_file(session_file, encoding="utf-8") as fh:
            text = fh.read()
        session = parse(text)
        options = RunOptions(max_relation_degree, max_cofactor_degree, trunc, seed, _scales(scales), samples, arcs)
        options.bounds()
        options.ladder()
    except (OSError, SessionError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INPUT)
    if print_session:
        from .dsl import print_session as _print
        click.echo(_print(session), nl=False)
        sys.exit(EXIT_OK)
    docs, code = run(session, options)
    click.echo(render(docs, fmt))
    sys.exit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
