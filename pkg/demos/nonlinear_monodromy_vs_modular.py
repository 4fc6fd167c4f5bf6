"""
The Poincare return map acts on the surface as a modular word
=============================================================

Dragging the pole triple around a closed pure braid and flowing the
phase point along produces a return map.  On monodromy coordinates this
map is polynomial: the braid letter beta_i acts as the generator g_i of
the modular group of the cubic surface.  This script checks the match
for the pure braid beta_1^2 and iterates a longer modular orbit.
"""

import numpy as np

from pvi import cubic, flow, fuchsian, modular, params

kappa = params.Exponents.from_free(0.21, 0.33, 0.17, 0.11)
pt = fuchsian.PhasePoint.make(0.4 + 0.3j, 0.2 - 0.5j, (0.0, 1.0, 2.0), kappa)

# Flow once around the loop realizing beta_1^2 in the pole triple.
ret = flow.nonlinear_monodromy(pt, "1 1")
x_start = fuchsian.rh_point(pt).x
x_end = fuchsian.rh_point(ret).x
print(f"return map endpoint: q = {ret.q:.10f}, p = {ret.p:.10f}")

# Compare against both orientation conventions of the dictionary.
theta = params.rh_param(kappa)
start = modular.AmbientPoint.make(x_start, theta)
for orientation in ("fwd", "inv"):
    word = modular.braid_to_modular("1 1", orientation=orientation)
    img = modular.apply_word(word, start)
    dev = max(abs(np.asarray(img.x) - x_end))
    print(f"  orientation {orientation}: modular word {word}, "
          f"|g(x_start) - x_end| = {dev:.3g}")

# Singular points of the surface are fixed by every level-two word.
sing = modular.AmbientPoint.make([2.0, 2.0, 2.0], [8.0, 8.0, 8.0, 28.0])
print()
print("D4 point fixed by g1^2:",
      modular.fixed_point_check([1, 1], sing))

# Generic orbits escape doubly exponentially while conserving the value
# of f (up to roundoff at the cubic's own scale |x|^3); the iterator
# reports the escape instead of overflowing.
word = modular.parse_word("1 1 -2 -2")
point = modular.AmbientPoint.make([0.3, 0.1, -0.2], [8.0, 8.0, 8.0, 28.0])
f0 = cubic.eval_f(np.asarray(point.x), np.asarray(point.theta))
print("orbit of the word g1^2 g2^-2 from a generic ambient point")
step = 0
try:
    while step < 12:
        point = modular.apply_word(word, point)
        step += 1
        f_now = cubic.eval_f(np.asarray(point.x), np.asarray(point.theta))
        scale = 1.0 + max(abs(np.asarray(point.x))) ** 3
        print(f"  step {step}: |x| = {max(abs(np.asarray(point.x))):10.4g}, "
              f"relative f drift = {abs(f_now - f0) / scale:.3g}")
except modular.EscapeError as err:
    print(f"  escape detected at step {step + 1}: {err}")
