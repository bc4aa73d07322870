from rocofbench.application.services.estimators.ipdft import (
    e_ipdft_estimate,
    i_ipdft_estimate,
    ipdft_core,
)
from rocofbench.application.services.estimators.rocof import rocof_from_stream
from rocofbench.application.services.estimators.stream import (
    estimate_stream,
    get_estimator,
)
from rocofbench.application.services.estimators.taylor_fourier import (
    tfm_estimate,
)
from rocofbench.application.services.estimators.windows import windows

__all__ = [
    "e_ipdft_estimate",
    "estimate_stream",
    "get_estimator",
    "i_ipdft_estimate",
    "ipdft_core",
    "rocof_from_stream",
    "tfm_estimate",
    "windows",
]
