from .mlp import MlpConfig, MlpResult, mlp_experiment
from .regression import RegressionConfig, RegressionResult, regression_risk
from .rotation import RotationDemoConfig, RotationDemoResult, rotation_averaging_demo

__all__ = [
    "MlpConfig",
    "MlpResult",
    "mlp_experiment",
    "RegressionConfig",
    "RegressionResult",
    "regression_risk",
    "RotationDemoConfig",
    "RotationDemoResult",
    "rotation_averaging_demo",
]
