"""Executable generalized span categories over finite categories."""

from .category import (FiniteCategory, Functor, apply_functor, apply_functor_obj, compose, hom_set,
                       identity_functor, invert, validate_category, validate_functor)
from .errors import *  # noqa: F401,F403
from .genspan import (SpanCategory, build_span_category, check_category_laws, classic_equivalence,
                      compose_along, find_f_pullbacks, identity_class, is_span_tight, span_compose)
from .pullbacks import (enumerate_cospans, find_pullbacks, has_pullbacks, is_pullback, paired_spans,
                        preserves_pullbacks)
from .report import CheckReport
from .spans import (Cospan, Span, SpanClass, canonicalize, is_paired, is_span_isomorphism, same_class,
                    span_morphisms)

__version__ = "0.1.0"
