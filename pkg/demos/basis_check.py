"""Truncated composition check and the direct-sum consequence.

For an admissible rule system, every overlap of two rule instances (an
"intersection" or "including" composition) must reduce to zero, and the
irreducible words then form a linear basis of the quotient: every word
normalizes into their span, irreducible words are fixed, and ideal elements
vanish.  This script runs both checks at a finite truncation bound and then
lists the irreducible words over a single generator.

Run:  python3 demos/basis_check.py [--pattern SPEC] [--breadth B] [--depth D]
"""

import argparse
import random
import time

from opalg import (GeneratorSet, GeneratorSystem, OrderConfig,
                   TruncationBound, cdl_direct_sum_check, gsb_check_truncated,
                   irr_enumerate, named_pattern, to_str, word_sort_key)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pattern", default="derivation",
                    help="named pattern (default: derivation)")
    ap.add_argument("--breadth", type=int, default=2)
    ap.add_argument("--depth", type=int, default=1)
    args = ap.parse_args()

    ident = named_pattern(args.pattern)
    bound = TruncationBound(args.breadth, args.depth, 3)
    sys = GeneratorSystem(ident, OrderConfig(bound.generator_set()))

    t0 = time.time()
    rep = gsb_check_truncated(sys, bound)
    print(rep.describe())
    print(f"   ({time.time() - t0:.1f}s)\n")

    t0 = time.time()
    cdl = cdl_direct_sum_check(sys, bound, rng=random.Random(5),
                               ideal_samples=50)
    print(cdl.describe())
    print(f"   ({time.time() - t0:.1f}s)\n")

    z = GeneratorSet(("z",))
    zsys = GeneratorSystem(ident, OrderConfig(z))
    irr = irr_enumerate(zsys, TruncationBound(2, 2, 1), gens=z)
    plain = [w for w in sorted(irr, key=word_sort_key)
             if "1" not in to_str(w)]
    print(f"irreducible words over one generator "
          f"(breadth <= 2, depth <= 2, unit brackets omitted):")
    for w in plain:
        print(f"    {to_str(w)}")


if __name__ == "__main__":
    main()
