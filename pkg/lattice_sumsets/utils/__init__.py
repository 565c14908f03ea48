from .formats import (
    dumps,
    format_point_set,
    format_progression,
    parse_box,
    parse_int_list,
    parse_point_list,
    parse_point_set,
    parse_progression,
    parse_rational,
    read_point_list,
    read_point_set,
    read_progression,
)
from .random_sets import GENERATOR_NAME, make_rng, random_points, random_subset
