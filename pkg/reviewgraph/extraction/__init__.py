from .triples import (OpinionTriplet, TripleBatch, canonical_relation,
                      locate_json, parse_triple_batch, parse_triple_string,
                      render_triple_string)
from .dimensions import (DimensionAssignment, parse_category,
                         parse_dimension_reply, read_assignments,
                         write_assignments)
from .builder import build_graph, opinion_keys, reviewer_opinion_keys
