"""Smoke test for the lmcalc Python module.

Build and install it first:

    pip install --no-build-isolation ./crates/python
"""

import lmcalc
from lmcalc import EquationSet, Term, Type

omega = Term(r"(\x. (x x) \x. (x x))")
verdict, trace = omega.sn("beta", fuel=100)
assert verdict == "loop", verdict
assert trace.lg == 1 and trace.end == omega

ident = Term(r"(\x. x y)")
trace, normal = ident.normalize("beta")
assert normal and str(trace.end) == "y"
assert [label for label, _, _ in trace.steps] == ["beta"]
assert Term(r"\a. a") == Term(r"\b. b")

pair = Term("(<x, y> p1)")
assert pair.sort == "full"
assert pair.reducts("full")[0][2] == Term("x")
image = pair.circle()
assert image.sort == "lambda-mu"
assert image.sn("betamu-rt")[0] == "sn"

church = Term(r"\x:A. mu a:~A. [a] x", church=True)
lmcalc.check(church, Type("A -> A"))
assert lmcalc.infer(church) == Type("A -> A")
d = church.diamond()
assert d.sort == "lambda"
lmcalc.check(d, Type("A -> A"))
try:
    lmcalc.check(Term(r"\x:A. x", church=True), Type("A -> B"))
except TypeError:
    pass
else:
    raise AssertionError("ill-typed term accepted")

bad = EquationSet(r"X = A /\ (X -> B)")
good = EquationSet(r"X = A /\ (B -> X)")
assert not bad.is_good() and good.is_good()
assert good.congruent(Type("X"), Type(r"A /\ (B -> X)"))

items = lmcalc.corpus("lambda-mu", 5)
assert len(items) > 0
assert all(t.sn("betamu")[0] == "sn" for t, _ in items)

tried, passed, failed, inconclusive, failures = lmcalc.verify("mendler-counter")
assert (tried, failed) == (3, 0), failures
tried, passed, failed, inconclusive, _ = lmcalc.verify("postpone", count=20)
assert tried == 20 and failed == 0

print("python smoke test passed")
