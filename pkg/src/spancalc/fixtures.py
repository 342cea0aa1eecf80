"""Small named objects used by the command line and the tests."""

from .spans import compose_spans, span


def intro_copy():
    """3 <- 8 -> 8: make the copies (a, b), c, (a, a, a, b, c)."""
    return span(3, 8, (1, 0, 2, 0, 0, 0, 1, 2), tuple(range(8)))


def intro_add():
    """8 <- 8 -> 4: add the copies up into four outputs."""
    return span(8, 4, tuple(range(8)), (0, 0, 1, 3, 3, 3, 3, 3))


def intro_span():
    return compose_spans(intro_copy(), intro_add())


def add_span(n=2):
    """n <- n -> 1."""
    return span(n, 1, tuple(range(n)), (0,) * n)


def copy_span(n=2):
    """1 <- n -> n."""
    return span(1, n, (0,) * n, tuple(range(n)))


NAMED = {
    "intro": intro_span,
    "intro-copy": intro_copy,
    "intro-add": intro_add,
    "add": add_span,
    "copy": copy_span,
}
