//! Projection of star networks and perturbed states back to restricted form.

mod method1;
mod method2;

pub use method1::{
    chi_log, fit_factor, fit_hub, log_f_factor, project_method1, FactorFit, HubFit, Method1Report,
    Method1Variant, FIT_MAX_ITER, FIT_TOL,
};
pub use method2::{
    infidelity_first_order, method2_deltas, method2_update, variance_pq, Method2Update,
    EXACT_VARIANCE_MAX,
};
