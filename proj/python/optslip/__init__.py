"""Quarter-car optimal-slip estimation toolkit.

Thin wrapper over the compiled core: Burckhardt friction curves, the
synthetic-dataset + MLP training pipeline, the RLS baseline and the braking
simulator.
"""

from ._core import (  # noqa: F401
    FrictionCube,
    FrictionParams,
    Interval,
    MlpModel,
    RlsBasis,
    RlsState,
    RunConfig,
    __version__,
    discretize_curve,
    init_model,
    load_model,
    mu,
    mu_slope,
    optimal_slip,
    reference_surface,
    rls_init,
    rls_optimal_slip,
    rls_update,
    sample_diagonal,
    sample_hypercube,
    save_model,
    simulate,
    slip_from_speeds,
    sweep_brake_torque,
    train_pipeline,
)
