"""Network analysis with rendered-image selectors."""

from ._netsight import (
    ConvergenceError,
    DomainError,
    Graph,
    ParseError,
    PipelineError,
    RenderError,
    ScriptExhausted,
    __version__,
    auc,
    benchmark_oracle,
    centrality,
    check_result_schema,
    connected_components,
    detect_communities,
    dismantle,
    encode_text,
    expected_spread,
    generate,
    has_cycle,
    heuristic_seeds,
    largest_component_size,
    layout,
    local_search,
    merge_communities,
    modularity,
    robustness_R,
    run_im,
    shortest_distance,
    solve_task,
    visualize,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
