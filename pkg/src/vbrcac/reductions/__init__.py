from .coloring import (
    ColoringReduction,
    Graph,
    GroupPacking,
    SelfAligningSet,
    best_group_packing,
    colors_from_span,
    graph_to_stringpack,
    pack_groups,
    recover_colors,
    self_aligning,
    set_partitions,
    shift_collisions,
    verify_self_aligning,
    vertex_color_brute,
)
from .scp import SCPInstance, SCPReduction, scp_brute, scp_to_2ss, scp_via_2ss
from .stringpack import (
    BudgetExceeded,
    StringPackInstance,
    pack_via_mss,
    packing_span,
    stringpack_brute,
    stringpack_to_mss,
    verify_packing,
)
