"""
When does spreading hurt?
=========================

Compare alpha > 1 against alpha = 1 through the threshold regions, then
scan the regions numerically to make sure they hold.
"""

from alloc_rate.theorem_bounds import (
    fixed_scaled_regions,
    fixed_shifted_regions,
    prob_scaled_regions,
    verify_region,
)

rep = fixed_scaled_regions(30, 2, 1.0, 4)
print("fixed access, scaled service, N=30 m=2 alpha=4")
print("  worse for r in", rep.worse_region)
print("  better for r in", rep.better_region)
print("  integer ranges:", rep.integer_ranges())

rep = prob_scaled_regions(2, 1.0, 4)
print("probabilistic access, m=2 alpha=4")
print("  worse for p in", rep.worse_region)
print("  better for p in", rep.better_region)

# a small shift removes the 'better' region entirely
rep = fixed_shifted_regions(30, 2, 1.0, 1.0, 4)
print("shifted delta=1: better region exists?", rep.better_exists)

# none of these should produce counterexamples
for rep in (fixed_scaled_regions(30, 2, 1.0, 4), prob_scaled_regions(2, 1.0, 4),
            fixed_shifted_regions(30, 2, 1.0, 10.0, 4)):
    rec = verify_region(rep)
    print(f"{rep.service!r}: checked {rec.checked}, counterexamples {len(rec.counterexamples)}")

