"""Exact arithmetic in Thompson's group F and a witness over its action.

Elements are piecewise-linear homeomorphisms of [0,1] with dyadic
breakpoints and power-of-two slopes.  Every computation below is exact
integer arithmetic; the certificate at the end is replayable bit for bit.
"""

from lawless import separation, thompson as th, words

x0, x1 = th.standard_generators()
print("x0 breakpoints:", x0)
print("x1 breakpoints:", x1)
print()

half = th.parse_dyadic("1/2^1")
print("x0(1/2) =", th.eval_dyadic(x0, half))
print("x0^2(1/2) =", th.eval_dyadic(th.compose_pl(x0, x0), half))
print("x0^-1(1/2) =", th.eval_dyadic(th.inverse_pl(x0), half))
print("x1 fixes [0, 1/2]: x1(1/4) =", th.eval_dyadic(x1, th.parse_dyadic("1/2^2")))
print()

# an element supported inside [1/4, 1/2] that moves 3/8
mover = th.interval_mover(th.parse_dyadic("1/2^2"), th.parse_dyadic("1/2^1"), th.parse_dyadic("3/2^3"))
print("interval mover:", mover)
print("support:", th.support_bounds(mover))
print("it moves 3/8 to", th.eval_dyadic(mover, th.parse_dyadic("3/2^3")), "and fixes 3/4:",
      th.eval_dyadic(mover, th.parse_dyadic("3/2^2")))
print()

# the action on interior dyadics separates, so no word is a law of F
action = separation.thompson_action()
word = words.parse_word("abAB")
cert = separation.certify_not_law(word, action, half)
print(f"witness for {word}: trajectory", " -> ".join(str(x) for x in cert.trace.trajectory))
value = words.evaluate(word, cert.trace.tuple_, action.multiply, action.invert, action.identity())
print("w(tuple) has", len(value.breakpoints), "breakpoints; identity?", value.is_identity())
print("certificate re-verifies:", separation.check_certificate(cert, action) is None)
