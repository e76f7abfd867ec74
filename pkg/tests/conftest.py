import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gring.coefficients import GF, QQ, ZZ
from gring.ring import RingElement
from gring.words import reduce_word

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def letters(rank):
    return st.sampled_from([s for i in range(1, rank + 1) for s in (i, -i)])


def words(rank=2, max_len=4):
    return st.lists(letters(rank), max_size=max_len).map(lambda ls: reduce_word(ls))


def coeffs(domain):
    if domain.kind == "q":
        return st.fractions(min_value=-5, max_value=5, max_denominator=4)
    if domain.kind == "z":
        return st.integers(-5, 5)
    return st.integers(0, domain.p - 1)


def elements(domain=QQ, rank=2, max_terms=4, max_len=3, nonzero=False):
    e = st.dictionaries(words(rank, max_len), coeffs(domain), max_size=max_terms).map(
        lambda t: RingElement(domain, rank, t))
    return e.filter(bool) if nonzero else e


DOMAINS = [QQ, ZZ, GF(2), GF(3), GF(101)]
FIELDS = [QQ, GF(2), GF(5), GF(101)]


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
