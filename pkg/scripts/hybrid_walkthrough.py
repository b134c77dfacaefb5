#!/usr/bin/env python3
"""Walk both hybrid chains and report functional equivalence at every step.

Each adjacent pair in the security argument is either functionally identical
(checked by exhaustive scan) or a documented distributional step; the one
intentional non-equivalence (dropping the missing user's PRG test) is shown
with its counterexample.

Usage:
  python3 scripts/hybrid_walkthrough.py --n 6 --m 48 --i-star 3 --seed 5
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from weak_tt import short_ctext as SC
from weak_tt import short_key as SK
from weak_tt.obf import programs_equivalent
from weak_tt.seeding import derive


def report(label: str, result) -> None:
    if result.equivalent:
        print(f"  {label}: identical on all {result.inputs_checked} scanned inputs")
    else:
        print(f"  {label}: DIFFER at {result.counterexample}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--m", type=int, default=48)
    ap.add_argument("--i-star", dest="i_star", type=int, default=3)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()
    b0, b1 = 1, 0

    print(f"short-ctext chain (n={args.n}, m={args.m}, i*={args.i_star}):")
    sc = SC.setup(SC.SchemeParamsSC(n=args.n, m=args.m, lambda_bits=64), derive(args.seed, "sc"))
    p0 = sc.program.payload
    p1 = SC.build_hybrid_sc(1, sc, args.i_star)
    report("P  ~ P1 (hardcode x* = PRG(user seed))", programs_equivalent(p0, p1))
    p1u = SC.build_hybrid_sc(1, sc, args.i_star, seed=derive(args.seed, "x*"), fresh_x_star=True)
    p2 = SC.build_hybrid_sc(2, sc, args.i_star)
    report("P1(uniform x*) ~ P2 (drop unsatisfiable test)", programs_equivalent(p1u, p2))
    report("P  ~ P2 (the step that needs hiding)", programs_equivalent(p0, p2))
    ch = SC.ChallengeSC(
        c0=SC.encrypt(sc.master, args.i_star - b0, derive(args.seed, "c0")), b0=b0,
        c1=SC.encrypt(sc.master, args.i_star - b1, derive(args.seed, "c1")), b1=b1,
    )
    p3 = SC.build_hybrid_sc(3, sc, args.i_star, challenge=ch)
    p4 = SC.build_hybrid_sc(4, sc, args.i_star, challenge=ch)
    report("P2 ~ P3 (hardcode challenges, puncture)", programs_equivalent(p2, p3))
    report("P3 ~ P4 (challenge bits unused)", programs_equivalent(p3, p4))

    print(f"\nshort-key chain (n={args.n}, m={args.m}, i*={args.i_star}, b0={b0}):")
    sk = SK.setup(SK.SchemeParamsSK(n=args.n, m=args.m, lambda_bits=64), derive(args.seed, "sk"))
    honest = SK.encrypt(sk.master, args.i_star - b0, derive(args.seed, "h")).program.payload
    q1, _ = SK.build_hybrid_sk(1, sk.master, args.i_star, b0, derive(args.seed, "q1"),
                               prf_enc=honest.prf_enc)
    report("P  ~ P1 (hardcode s*, puncture user PRF)", programs_equivalent(honest, q1.program.payload))
    q2, ctx2 = SK.build_hybrid_sk(2, sk.master, args.i_star, b0, derive(args.seed, "q2"))
    q3, _ = SK.build_hybrid_sk(3, sk.master, args.i_star, b0, derive(args.seed, "q3"),
                               s_tilde=ctx2.s_tilde, prf_enc=ctx2.prf_enc)
    report("P2 ~ P3 (puncture at (i*, s~))", programs_equivalent(q2.program.payload, q3.program.payload))
    q4, ctx4 = SK.build_hybrid_sk(4, sk.master, args.i_star, b0, derive(args.seed, "q4"))
    q5, _ = SK.build_hybrid_sk(5, sk.master, args.i_star, b0, derive(args.seed, "q5"),
                               s_tilde=ctx4.s_tilde, prf_enc=ctx4.prf_enc)
    report("P4 ~ P5 (delete the s~ branch under conditioning)",
           programs_equivalent(q4.program.payload, q5.program.payload))
    e0, _ = SK.build_hybrid_sk(6, sk.master, args.i_star, 0, derive(args.seed, "q6"))
    e1, _ = SK.build_hybrid_sk(6, sk.master, args.i_star, 1, derive(args.seed, "q6"))
    print(f"  Enc6 identical for b0 = 0 and b0 = 1 at fixed seed: {e0.serialize() == e1.serialize()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
