"""
Command-line surface.

Exit codes: 0 all checks pass, 1 check failures, 2 usage or input errors.
Human-readable tables go to standard output; `axioms --report` writes the
machine report (timings excluded from its content hash).
"""

import argparse
import json
import sys

from . import analysis, build, change, ctrl, docio, harness, homology, rips, snf
from .groups import group_by_name
from .spaces import Action, CoarsexError, PreconditionError, validate_space

USAGE_ERROR = 2
CHECK_FAILURE = 1


def _load_space(path):
    return docio.space_from_doc(docio.load(path), where=path)


def _load_hom(path):
    return docio.hom_from_doc(docio.load(path), where=path)


def _gamma_set(group, spec):
    """A finite Gamma-set: 'point' or a space document over the group."""
    if spec in (None, "point"):
        return Action.trivial(("*",), group)
    doc = docio.load(spec)
    sp = docio.space_from_doc(doc, where=spec)
    if sp.group != group:
        raise docio.DocumentError("set document %s is over a different group" % spec)
    return sp.action


def _homology_table(groups):
    return "\n".join(
        "H%d %s" % (n, snf.group_str(g)) for n, g in enumerate(groups)
    )


def cmd_validate(args):
    sp = _load_space(args.space)
    rep = validate_space(sp)
    print(rep)
    return 0 if rep.ok else CHECK_FAILURE


def cmd_homology(args):
    sp = _load_space(args.space)
    groups = homology.homology_groups(sp, args.max_degree)
    print(_homology_table(groups))
    return 0


def cmd_group_homology(args):
    G = group_by_name(args.group)
    S = _gamma_set(G, args.set)
    cx = homology.standard_group_complex(G, S, args.max_degree + 1)
    groups = homology.homology_groups(cx, args.max_degree)
    print(_homology_table(groups))
    return 0


def cmd_phi_psi(args):
    G = group_by_name(args.group)
    S = _gamma_set(G, args.set)
    _, _, rep = homology.phi_psi(G, S, args.max_degree)
    ok = (
        rep.psi_phi_identity
        and rep.phi_psi_identity
        and rep.chain_map
        and rep.homology_agrees
    )
    print("psi o phi = id:", rep.psi_phi_identity)
    print("phi o psi = id:", rep.phi_psi_identity)
    print("boundary compatible:", rep.chain_map)
    print("homologies agree:", rep.homology_agrees)
    print(_homology_table(rep.standard_homology))
    return 0 if ok else CHECK_FAILURE


def cmd_rips(args):
    doc = docio.load(args.space)
    sp = docio.space_from_doc(doc, where=args.space)
    U = docio.entourage_from_doc(doc, args.entourage, where=args.space)
    from .spaces import diagonal

    K, P = rips.rips_complex(sp, U | diagonal(sp.carrier), args.max_dim)
    print("simplex counts:", " ".join(str(c) for c in K.counts()))
    groups = rips.simplicial_homology(K, min(args.max_dim, K.dim()))
    print(_homology_table(groups))
    if args.export:
        with open(args.export, "w") as fh:
            fh.write(rips.export_complex(K))
    return 0


def cmd_change_group(args):
    hom = _load_hom(args.hom)
    sp = _load_space(args.space)
    out = change.change_group(args.kind, sp, hom)
    rep = validate_space(out)
    print("result: %d points over %s" % (len(out.carrier), out.group.name))
    print(rep)
    if args.out:
        docio.dump(docio.space_to_doc(out), args.out)
    return 0 if rep.ok else CHECK_FAILURE


def cmd_mackey(args):
    hom = _load_hom(args.hom)
    hom2 = _load_hom(args.hom2) if args.hom2 else hom
    sp = _load_space(args.space)
    rep = change.mackey_check(sp, hom, hom2)
    print("double cosets:", len(rep.double_cosets))
    print("representatives:", rep.representatives)
    print("orientation:", rep.orientation)
    print("isomorphism certified:", rep.isomorphism)
    if rep.flagged:
        print("FLAGGED: neither conjugation orientation transported")
    return 0 if rep.isomorphism else CHECK_FAILURE


def cmd_axioms(args):
    cfg = harness.SuiteConfig(
        seed=args.seed,
        trials=args.trials,
        size_min=args.size_min,
        size_max=args.size_max,
        max_degree=args.max_degree,
    )
    rep = harness.axiom_suite(cfg, mutate=args.mutate)
    for check, (total, passed, secs) in sorted(rep.summary().items()):
        print("%-28s %4d/%-4d  %7.2fs" % (check, passed, total, secs))
    print("hash", rep.content_hash())
    if args.report:
        docio.dump(rep.to_doc(), args.report)
    return 0 if rep.ok else CHECK_FAILURE


def cmd_ctrl(args):
    if args.ctrl_command == "validate":
        obj, _ = docio.ctrl_object_from_doc(docio.load(args.object), where=args.object)
        print("valid controlled object:", obj)
        return 0
    if args.ctrl_command == "functor":
        obj, space = docio.ctrl_object_from_doc(docio.load(args.object), where=args.object)
        if args.target == "bh":
            rep = ctrl.bh_equivalence_report(space, space.group, [obj])
            print("round trips isomorphic to identity:", rep.round_trip_1 and rep.round_trip_2)
            return 0 if rep.round_trip_1 and rep.round_trip_2 else CHECK_FAILURE
        rep = ctrl.conv_equivalence_report(space, [obj], hom_samples=1)
        print("faithful:", rep.faithful, "full:", rep.full)
        print("essentially surjective:", rep.essentially_surjective)
        ok = rep.faithful and rep.full and rep.essentially_surjective
        return 0 if ok else CHECK_FAILURE
    if args.ctrl_command == "quotient-hom":
        obj, space = docio.ctrl_object_from_doc(docio.load(args.object), where=args.object)
        sub = frozenset(args.sub.split(",")) if args.sub else frozenset()
        rep = ctrl.quotient_hom(obj, obj, sub)
        print("hom rank:", rep.hom_rank)
        print("quotient:", snf.group_str(rep.quotient))
        if rep.flagged:
            print("FLAGGED: factoring lattice differs from the vanishing lattice")
        return 0 if not rep.flagged else CHECK_FAILURE
    if args.ctrl_command == "karoubi":
        obj, space = docio.ctrl_object_from_doc(docio.load(args.object), where=args.object)
        if args.base:
            base = frozenset(args.base.split(","))
        else:
            base = space.action.orbit(min(space.carrier))
        fam = analysis.generated_big_family(space, base)
        A = ctrl.restrict_object(obj, frozenset(fam.stages[0]))
        f = ctrl.restriction_inclusion(obj, frozenset(fam.stages[0]))[1]
        _, g = ctrl.restriction_projection(obj, frozenset(fam.stages[0]))
        diagram = ctrl.karoubi_complete(f, g, fam)
        print("absorbing stage:", diagram.stage_absorbing)
        print("diagram commutes:", diagram.commutes)
        return 0 if diagram.commutes else CHECK_FAILURE
    raise PreconditionError("unknown ctrl command")


def make_parser():
    p = argparse.ArgumentParser(
        prog="coarsex",
        description="finite-scale equivariant coarse geometry workbench",
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", help="validate a space document")
    q.add_argument("space")
    q.set_defaults(fn=cmd_validate)

    q = sub.add_parser("homology", help="equivariant coarse homology of a space")
    q.add_argument("--max-degree", type=int, default=2)
    q.add_argument("space")
    q.set_defaults(fn=cmd_homology)

    q = sub.add_parser("group-homology", help="standard-complex group homology")
    q.add_argument("--group", required=True, choices=["1", "Z2", "Z3", "Z4", "S3"])
    q.add_argument("--set", default="point", help="'point' or a space document")
    q.add_argument("--max-degree", type=int, default=3)
    q.set_defaults(fn=cmd_group_homology)

    q = sub.add_parser("phi-psi", help="certify the group-homology comparison")
    q.add_argument("--group", required=True, choices=["1", "Z2", "Z3", "Z4", "S3"])
    q.add_argument("--set", default="point")
    q.add_argument("--max-degree", type=int, default=2)
    q.set_defaults(fn=cmd_phi_psi)

    q = sub.add_parser("rips", help="Rips complex of a named entourage")
    q.add_argument("--entourage", required=True)
    q.add_argument("--max-dim", type=int, default=4)
    q.add_argument("--export", help="write the complex, one simplex per line")
    q.add_argument("space")
    q.set_defaults(fn=cmd_rips)

    q = sub.add_parser("change-group", help="apply a change-of-group functor")
    q.add_argument("--kind", required=True, choices=["res", "bh", "qh", "ind"])
    q.add_argument("--hom", required=True)
    q.add_argument("--out", help="write the resulting space document")
    q.add_argument("space")
    q.set_defaults(fn=cmd_change_group)

    q = sub.add_parser("mackey", help="certify the double-coset formula")
    q.add_argument("--hom", required=True)
    q.add_argument("--hom2")
    q.add_argument("space")
    q.set_defaults(fn=cmd_mackey)

    q = sub.add_parser("axioms", help="run the coarse-homology axiom suite")
    q.add_argument("--seed", type=int, default=42)
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--size-min", type=int, default=2)
    q.add_argument("--size-max", type=int, default=6)
    q.add_argument("--max-degree", type=int, default=2)
    q.add_argument("--mutate", choices=list(harness.MUTATIONS))
    q.add_argument("--report", help="write the machine report JSON")
    q.set_defaults(fn=cmd_axioms)

    q = sub.add_parser("ctrl", help="controlled-module operations")
    qq = q.add_subparsers(dest="ctrl_command", required=True)
    v = qq.add_parser("validate")
    v.add_argument("object")
    v.set_defaults(fn=cmd_ctrl)
    v = qq.add_parser("functor")
    v.add_argument("--target", required=True, choices=["bh", "convolution"])
    v.add_argument("object")
    v.set_defaults(fn=cmd_ctrl)
    v = qq.add_parser("quotient-hom")
    v.add_argument("--sub", default="")
    v.add_argument("object")
    v.set_defaults(fn=cmd_ctrl)
    v = qq.add_parser("karoubi")
    v.add_argument("--base", default="")
    v.add_argument("object")
    v.set_defaults(fn=cmd_ctrl)
    return p


def run_command(argv):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if err.code is not None else USAGE_ERROR
    try:
        return args.fn(args)
    except docio.DocumentError as err:
        print("input error: %s" % err, file=sys.stderr)
        return USAGE_ERROR
    except (PreconditionError, CoarsexError) as err:
        print("error: %s" % err, file=sys.stderr)
        return USAGE_ERROR


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
