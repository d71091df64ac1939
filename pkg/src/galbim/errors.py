"""Exception taxonomy shared by every module.

Every raisable condition with a contract behind it gets its own class so
callers (and the fixture runner) can match on the name.
"""


class GalbimError(Exception):
    """Base class for all library errors."""


class FieldMismatch(GalbimError):
    """Operands belong to different fields."""


class NotAField(GalbimError):
    """A computed subspace is not closed under multiplication."""


class Reducible(GalbimError):
    """A polynomial expected to be irreducible splits."""


class DegreeBound(GalbimError):
    """A degree cap (factorization or tower construction) was exceeded."""


class ClosureBound(GalbimError):
    """Group closure exceeded the configured element bound."""


class NotAHomomorphism(GalbimError):
    """Proposed generator images violate a defining relation."""


class PrimitiveElementNotFound(GalbimError):
    """The deterministic primitive element search ran out of budget."""


class UnsupportedBase(GalbimError):
    """The operation needs factorization over a base that has none."""


class EigenvalueOutsideField(GalbimError):
    """A triangularization step met an eigenvalue not in the field."""


class NotSplit(GalbimError):
    """Composition factor extraction failed: the input is not split."""


class NotAPower(GalbimError):
    """A characteristic polynomial is not the expected power of the
    minimal polynomial."""


class ClassificationFailed(GalbimError):
    """classify could not verify the multiple-of-regular structure."""


class NotQuasiGalois(GalbimError):
    """A multi-base bimodule fails the quasi-Galois axioms."""


class NotPrimitiveRoot(GalbimError):
    """The supplied scalar is not a primitive root of unity of the
    required order."""


class NotModuleAlgebra(GalbimError):
    """Action data violates the module-algebra axioms."""


class AxiomViolation(GalbimError):
    """Structure tensors violate a (co)algebra or Hopf axiom."""


class NotInvertible(GalbimError):
    """A map required to be invertible is singular."""


class CoefficientEscapesZ(GalbimError):
    """An integrality certificate coefficient left the declared subring.

    Counterexample fixtures expect this condition; the certificate
    reports it as an outcome rather than raising, but the class exists
    for callers that want a hard failure.
    """


class Violated(GalbimError):
    """A stated invariant was violated (divisibility, idempotency...)."""


class NotASubgroup(GalbimError):
    """The supplied subset is not a subgroup."""


class NotIdempotent(GalbimError):
    """Hecke element expected to be idempotent is not."""


class ParseError(GalbimError):
    """Fixture file syntax error, with line information."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class ResolutionError(GalbimError):
    """A fixture refers to a name that is not (yet) declared."""
