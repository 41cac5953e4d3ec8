"""Print the redundancy of the implemented code next to the lower bound and
the construction's upper bound."""

from crisscross import analysis, codec

print(f"{'n':>5} {'t':>2} {'lower':>9} {'actual':>8} {'upper':>9}")
for n, t in [(64, 1), (128, 1), (128, 2), (128, 3), (256, 1), (256, 2), (256, 3)]:
    p = codec.make_params(n, t)
    actual = n * n - codec.message_capacity(p)
    lo = analysis.lower_bound_redundancy(n, t)
    hi = analysis.construction_upper_bound_bits(n, t)
    print(f"{n:>5} {t:>2} {lo:>9.1f} {actual:>8} {hi:>9.1f}")
