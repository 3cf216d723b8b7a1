from .syntax import (  # noqa: F401
    And, Bot, Color, Edge, Eq, Exists, Forall, FormulaError, Implies, Not, Or, Top,
    conj, disj, free_variables, is_sentence, parse, parse_sentence, quantifier_depth,
    to_text, uses_colors,
)
from .evaluate import Model, TensorModel, evaluate, evaluate_tensor  # noqa: F401
from .classes import (  # noqa: F401
    ClassSpec, Estimate, FrequencyRow, colored_sampler, hom_weight, named_digraph,
    parse_class, phi_n_estimate, phi_n_exact, trial_seeds,
)
from .axioms import ExtensionAxiom, extension_axioms, orbit_sentence, pp_to_formula  # noqa: F401
