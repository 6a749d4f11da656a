""" Provide the error classes raised across ``reviewgraph``.

Data and validation errors also subclass ``ValueError`` so that callers can
keep catching the built-in exception.

"""


# -- Base Class --------------------------------------------------------------

class ReviewGraphError(Exception):
    """ Base class for every error raised by the package. """


# -- Graph errors ------------------------------------------------------------

class GraphValidationError(ReviewGraphError, ValueError):
    """ A graph failed schema validation. Carries the list of violations. """

    def __init__(self, violations, graph_id=None):
        self.violations = list(violations)
        self.graph_id = graph_id
        super().__init__("Graph '{}' is invalid:\n  {}"
                         "".format(graph_id, '\n  '.join(self.violations)))


class AblationError(ReviewGraphError, ValueError):
    pass


# -- Extraction errors -------------------------------------------------------

class MalformedTriple(ReviewGraphError, ValueError):
    pass


class WrongGroupSpeaker(ReviewGraphError, ValueError):
    pass


class UnknownRelationLabel(ReviewGraphError, ValueError):

    def __init__(self, label, group):
        self.label = label
        self.group = group
        super().__init__("'{}' is not a {} relation label."
                         "".format(label, group))


class NotJson(ReviewGraphError, ValueError):
    pass


class MissingArrayKey(ReviewGraphError, ValueError):
    pass


class MalformedBatch(ReviewGraphError, ValueError):
    pass


class MissingDimensionAssignment(ReviewGraphError, ValueError):

    def __init__(self, orphans):
        self.orphans = list(orphans)
        super().__init__("No dimension assignment for {} reviewer opinion(s):"
                         " {}".format(len(self.orphans), self.orphans))


class UnknownCategory(ReviewGraphError, ValueError):
    pass


# -- Numerical errors --------------------------------------------------------

class ShapeMismatch(ReviewGraphError, ValueError):

    def __init__(self, op, *shapes):
        self.shapes = shapes
        super().__init__("Shape mismatch in '{}': {}"
                         "".format(op, ' vs '.join(str(s) for s in shapes)))


class EmptyVector(ReviewGraphError, ValueError):
    pass


class BadLabel(ReviewGraphError, ValueError):
    pass


class NonFiniteLoss(ReviewGraphError, ArithmeticError):
    pass


class NonFiniteGradient(ReviewGraphError, ArithmeticError):
    pass


# -- Model errors ------------------------------------------------------------

class MissingEmbedding(ReviewGraphError, KeyError):

    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__("No embedding row for node {}.".format(node_id))

    def __str__(self):
        return self.args[0]


class DimMismatch(ReviewGraphError, ValueError):
    pass


# -- Training errors ---------------------------------------------------------

class EmptySplit(ReviewGraphError, ValueError):
    pass


class LengthMismatch(ReviewGraphError, ValueError):
    pass


class DegenerateSample(ReviewGraphError, ValueError):
    pass


class CheckpointIoError(ReviewGraphError, OSError):
    pass


class VersionMismatch(ReviewGraphError, ValueError):
    pass


class CorruptPayload(ReviewGraphError, ValueError):
    pass


# -- Endpoint errors ---------------------------------------------------------

class EndpointError(ReviewGraphError, RuntimeError):
    """ A failed endpoint request. Non-retryable errors (bad credentials,
    malformed requests) are raised at once, without backoff.

    """

    def __init__(self, message='', retryable=True):
        self.retryable = retryable
        super().__init__(message)


class EmptyCompletion(EndpointError):
    pass


class ExtractionFailed(ReviewGraphError, RuntimeError):
    pass


class ClassificationFailed(ReviewGraphError, RuntimeError):

    def __init__(self, comments):
        self.comments = list(comments)
        super().__init__("Could not classify {} comment(s): {}"
                         "".format(len(self.comments), self.comments))


class InconsistentDimension(ReviewGraphError, ValueError):
    pass
