"""Work extraction from qubit battery cells under amplitude-damping noise."""
from .capacitance import (
    CapacitanceCurve,
    CurveKind,
    capacitance_bounds,
    chi,
    concave_envelope,
    curve,
    dephasing_regime,
    max_output_ergotropy,
    max_output_ergotropy_fixed,
    optimal_input_energy,
)
from .channels import (
    ChannelKind,
    QubitChannel,
    adc,
    apply,
    dephadc,
    gadc,
    output_eigenvalues,
    output_energy,
    output_entropy,
    parse_channel,
    superoperator,
)
from .ergotropy import (
    ErgotropyReport,
    ergotropy,
    local_ergotropy_product,
    thermal_extractable_work,
    total_ergotropy,
)
from .linalg import ValidationError, eig_hermitian, partial_trace, tensor
from .mawer import (
    Flavor,
    OpenValueError,
    classical_strategy_ratio,
    mawer_closed_form,
    mawer_numeric,
    relative_gap,
)
from .multicell import (
    ProductInputSpec,
    SearchResult,
    classical_state_analysis,
    monotonicity_check,
    product_output_ergotropy,
    superadditivity_search,
)

__version__ = "0.1.0"
