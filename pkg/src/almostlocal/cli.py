"""Command-line front end: ``almostlocal {classify,scan,elem,wreath,examples}``."""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import criteria as C
from . import gff as G
from . import perm as P
from . import portrait as Q
from . import wreath as W
from .fields import FieldError
from .tree import TreeError, format_vertex

DOMAIN_ERRORS = (P.GroupError, Q.PortraitError, G.GffError, W.WreathError,
                 C.ClassifyError, TreeError, FieldError)


class DomainError(Exception):
    pass


def _group(spec: str) -> P.PermGroup:
    return P.construct_group(spec)


# ---------------------------------------------------------------- classify / scan

def cmd_classify(args, out):
    F, Fp = _group(args.F), _group(args.Fp)
    Fpp = _group(args.Fpp) if args.Fpp else None
    out.write(C.classify(F, Fp, Fpp, args.k).text() + "\n")


def cmd_scan(args, out):
    res = C.scan(args.degree, args.filter, args.k, max_degree=args.max_degree)
    out.write(C.format_scan(res) + "\n")


# ---------------------------------------------------------------- elem

def _offender(Pr: G.GroupPair, g: Q.Portrait) -> str:
    for v in sorted(g.internal, key=len):
        if g.internal[v] not in Pr.Fp:
            return f'vertex "{format_vertex(v)}" has local permutation {P.format_perm(g.internal[v])} outside F\''
    for v in sorted(g.tails, key=len):
        if g.tails[v] not in Pr.F:
            return f'tail "{format_vertex(v)}" is constant {P.format_perm(g.tails[v])}, not in F'
    return "element is not in G(F,F')"


def _write(outdir: Path | None, name: str, text: str):
    if outdir is None:
        return
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / name).write_text(text)


def _check_roundtrip(g: Q.Portrait):
    if Q.parse_portrait(Q.format_portrait(g)) != g:
        raise DomainError("portrait text does not re-parse to the same element")  # pragma: no cover


def cmd_elem(args, out):
    parts = P.split_args(args.pair)
    if len(parts) != 2:
        raise DomainError("--pair expects two group descriptors separated by a comma")
    Pr = G.GroupPair.from_specs(parts[0], parts[1])
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {args.input}: {exc.strerror}") from None
    g = Q.parse_portrait(text)
    if g.degree != Pr.d:
        raise DomainError(f"portrait has degree {g.degree} but the pair has degree {Pr.d}")
    if not G.in_gffp(Pr, g):
        raise DomainError(_offender(Pr, g))
    Fpp = _group(args.Fpp) if args.Fpp else None
    outdir = Path(args.out) if args.out else None
    op = args.op
    if op == "report":
        m = G.membership_report(Pr, g)
        yn = {True: "yes", False: "no"}
        out.write("\n".join([f"in_UF: {yn[m.in_UF]}", f"in_GFFp: {yn[m.in_GFFp]}",
                             f"type_preserving: {yn[m.type_preserving]}",
                             f"in_G0: {yn[m.in_G0]}", f"in_G1: {yn[m.in_G1]}"]) + "\n")
        out.write(G.format_singularity_report(G.singularity_report(Pr, g, Fpp)) + "\n")
    elif op == "decompose":
        gamma, factors = G.decompose_KU(Pr, g)
        if Q.product([gamma] + [x for _, x in factors], Pr.d) != g:
            raise DomainError("decomposition does not multiply back")  # pragma: no cover
        out.write(f"parts: {len(factors)}\n")
        _write(outdir, "gamma.portrait", Q.format_portrait(gamma))
        for i, (v, x) in enumerate(factors, 1):
            out.write(f'part {i}: vertex "{format_vertex(v)}"\n')
            _write(outdir, f"part_{i:03d}.portrait", Q.format_portrait(x))
        out.write("verified: yes\n")
    elif op == "word":
        word = G.word_decompose(Pr, g)
        if G.evaluate_word(Pr, word) != g:
            raise DomainError("word does not multiply back")  # pragma: no cover
        out.write(f"length: {len(word)}\nN: {G.N(Pr, g)}\nword: {word.text()}\n")
        _write(outdir, "word.txt", "\n".join(x.text() for x in word.letters) + "\n")
        for i, x in enumerate(word.letters, 1):
            if x.kind == "k":
                _write(outdir, f"letter_{i:03d}.portrait", Q.format_portrait(x.element))
        out.write("verified: yes\n")
    elif op == "reduce":
        if Fpp is not None:
            steps, residual = G.sigma_reduce(Pr, Fpp, g)
            elements = steps
            ok = Q.product(list(reversed(steps)) + [g], Pr.d) == residual
        else:
            if not G.simple_hypotheses(Pr):
                raise DomainError("reduction needs F transitive and F' = <[F'_a,F'_a], F_a>, "
                                  "or an index-two --Fpp")
            cert = G.reduce_simple(Pr, g)
            elements = [s.element for s in cert.steps]
            residual = cert.residual
            ok = G.verify_certificate(cert, g)
        if not ok:
            raise DomainError("reduction does not verify")  # pragma: no cover
        out.write(f"steps: {len(elements)}\n")
        for i, x in enumerate(elements, 1):
            _write(outdir, f"step_{i:03d}.portrait", Q.format_portrait(x))
        _write(outdir, "residual.portrait", Q.format_portrait(residual))
        out.write(f"residual_in_UF: {'yes' if G.in_uf(Pr, residual, Fpp) else 'no'}\n")
        out.write("verified: yes\n")
    elif op == "symdiff":
        out.write(f"{G.symdiff_M(Pr, g)}\n")
    if outdir is not None:
        for f in sorted(outdir.glob("*.portrait")):
            _check_roundtrip(Q.parse_portrait(f.read_text()))


# ---------------------------------------------------------------- wreath / examples

def cmd_wreath(args, out):
    D, Dp = _group(args.D), _group(args.Dp)
    if Dp.degree != args.ell:
        raise DomainError(f"D' acts on {Dp.degree} points but --ell is {args.ell}")
    ctx = W.WreathContext(args.ell, W.embed_subgroup(D, Dp), Dp)
    if args.level < 0:
        raise DomainError("--level must be nonnegative")
    blocks = [W.format_measure_report(ctx, W.haar_measures(ctx, n)) for n in range(args.level + 1)]
    out.write("\n\n".join(blocks) + "\n")


def cmd_examples(args, out):
    lib = C.example_library()
    if args.run != "all":
        lib = [e for e in lib if e.name == args.run]
        if not lib:
            raise DomainError(f"no example named {args.run!r}")
    failed = 0
    for ex in lib:
        ok, checks = C.run_example(ex)
        out.write(f"{'PASS' if ok else 'FAIL'} {ex.name}\n")
        for label, good in checks:
            if not good:
                out.write(f"  failed: {label}\n")
        failed += not ok
    out.write(f"{len(lib) - failed} of {len(lib)} examples pass\n")
    return 1 if failed else 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="almostlocal",
                                 description="Groups acting on trees with almost prescribed local action.")
    ap.add_argument("--seed", type=int, default=0, help="seed for any randomized step")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="which theorems apply to a pair F <= F'")
    p.add_argument("--F", required=True)
    p.add_argument("--Fp", required=True)
    p.add_argument("--Fpp")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="classify all subgroup pairs of Sym(d)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--filter")
    p.add_argument("--k", type=int)
    p.add_argument("--max-degree", type=int, default=C.MAX_SCAN_DEGREE)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("elem", help="operations on one element given as a portrait file")
    p.add_argument("--pair", required=True, help='"F,Fp" as two group descriptors')
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--op", required=True, choices=["report", "decompose", "word", "reduce", "symdiff"])
    p.add_argument("--Fpp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_elem)

    p = sub.add_parser("wreath", help="Haar measures of iterated wreath products")
    p.add_argument("--D", required=True)
    p.add_argument("--Dp", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--level", type=int, default=0)
    p.set_defaults(func=cmd_wreath)

    p = sub.add_parser("examples", help="run the built-in example vectors")
    p.add_argument("--run", default="all")
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    try:
        code = args.func(args, out)
    except (DomainError, *DOMAIN_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
