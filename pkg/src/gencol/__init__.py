"""Generalised colouring numbers of finite graphs: exact values, orders,
augmentations, partitions, centered colourings, games and covers."""

from .errors import ContractError, GencolError, ParseError, SizeLimitError, ValidationError
from .graph import INF, DiGraph, Graph, generate, parse_graph, read_graph, serialize_graph
from .reach import (
    OrderProfile,
    ReachMode,
    VertexOrder,
    exact_parameter,
    order_profile,
    reach_set,
)
from .admissibility import greedy_adm_order, max_fan, universal_order, verify_fan_set
from .augmentation import fraternal_augment, order_from_augmentation, trichotomy
from .partitions import ConnectedPartition, TreeDecomposition, compose_td_order, isometric_peel
from .colorings import Coloring, exact_distance_color, p_centered_zhu, verify_centered
from .games import GameTranscript, Strategy, counter_game, pursuit_game, splitter_game
from .wideness import Cover, WidenessCertificate, neighborhood_complexity, neighborhood_cover, uqw_extract

__version__ = "0.1.0"
