"""Cubillages of cyclic zonotopes: construction, flips, membranes, higher
Bruhat posets, separated set systems, and an exact geometric oracle."""

from .colors import (
    SetSystem,
    colorset,
    interval_rank,
    is_peripheral,
    is_r_separated,
    is_weakly_k_separated,
    packet,
    parity,
    separation_blocks,
)
from .cubillage import (
    Cube,
    Cubillage,
    CubillageError,
    Facet,
    Reduction,
    antistandard,
    boundary_plates,
    central_symmetry,
    contract,
    edge_graph,
    embed_subcubillage,
    expand,
    expand_at_back,
    expand_at_front,
    facet_sides,
    is_valid,
    partition,
    point_cubillage,
    reduce,
    snakes,
    standard,
    tunnel,
    validate,
)
from .geom import (
    Realization,
    det_exact,
    det_sign,
    overlap_free,
    render_svg,
    vertex_coordinates,
    volume_check,
)
from .order import (
    Garland,
    NaturalOrder,
    apply_flip,
    avalanche,
    canonical_extension,
    enumerate_membranes,
    enumerate_stacks,
    find_flips,
    garland,
    membrane_as_cubillage,
    membrane_of_stack,
    natural_order,
    plate_vertices,
    side_of_membrane,
    stack_of_membrane,
    standardize,
)
from .systems import (
    AdmissibleOrder,
    ExtensionReport,
    MembraneWitness,
    NotRealizableError,
    extension_search,
    from_consistent,
    from_order,
    from_spectra,
    inversions,
    is_consistent,
    order_of,
    weak_separation_suite,
)
from .bruhat import (
    BruhatPoset,
    ScaleGuardError,
    Triangulation,
    bruhat_poset,
    enumerate_cubillages,
    polygon_triangulations,
    sec,
    sec_surjectivity_experiment,
    segment_subdivisions,
    separated_system_count,
    triangulation_shape_ok,
)

__version__ = "0.1.0"
