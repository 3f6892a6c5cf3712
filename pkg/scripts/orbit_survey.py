#!/usr/bin/env python3
"""Survey orbit dimensions across the named state families.

Prints one table row per (family, n): the orbit dimension, the minimum
bound, and whether the state sits on the minimum.  Exact families use the
rational rank path; random states use the float path.

Usage: python3 scripts/orbit_survey.py [--n-max N] [--seed S]
"""

import argparse

from orbitscope import (
    MultiIndex,
    make_basis,
    make_cat,
    make_singlet_product,
    make_singlet_product_plus_zero,
    min_orbit_bound,
    orbit_dimension,
    sample_haar_state,
)


def rows(n_max, seed):
    for n in range(1, n_max + 1):
        yield f"basis:{'0' * n}", make_basis(MultiIndex((0,) * n))
        if n >= 2:
            yield f"cat:{n}", make_cat(n)
        if n % 2 == 0:
            yield f"singlet*{n // 2}", make_singlet_product(n // 2)
        elif n >= 3:
            yield f"singlet*{(n - 1) // 2}+0", make_singlet_product_plus_zero((n - 1) // 2)
        yield f"random:{n}:{seed}", sample_haar_state(n, seed)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'state':<18} {'n':>2} {'dim':>4} {'bound':>5} {'3n':>4}  minimal")
    for name, psi in rows(args.n_max, args.seed):
        dim = orbit_dimension(psi)
        bound = min_orbit_bound(psi.n)
        flag = "yes" if dim == bound else ""
        print(f"{name:<18} {psi.n:>2} {dim:>4} {bound:>5} {3 * psi.n:>4}  {flag}")


if __name__ == "__main__":
    main()
