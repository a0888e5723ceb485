from functools import lru_cache

from hypothesis import settings

from pyramid_algebras.algebra import build_algebra, quadratic_dual, stable_extension
from pyramid_algebras.quiver import generate_quiver

settings.register_profile("repo", deadline=None, max_examples=40)
settings.load_profile("repo")


@lru_cache(maxsize=None)
def pyramid(n, m):
    return build_algebra(generate_quiver(n, m))


@lru_cache(maxsize=None)
def stable(n, m):
    return stable_extension(pyramid(n, m))


@lru_cache(maxsize=None)
def stable_dual(n, m):
    return quadratic_dual(stable(n, m))
