from .symkernel import P, Poly  # noqa: F401
