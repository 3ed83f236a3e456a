//! Eschenburg and Bazaikin biquotients: freeness, curvature criteria,
//! cohomology orders, and a flat-plane sampler on `SU(3)`.

mod bazaikin;
mod eschenburg;
mod sampler;

pub use bazaikin::{baz_is_free, baz_is_positive, baz_order_h6, ps_bundle_order, BazaikinParams};
pub use eschenburg::{
    aloff_wallach_positive, esch_block_conditions, esch_is_free, esch_is_positive, esch_order_h4, EschenburgParams,
};
pub use sampler::{
    esch_horizontal_flat_sampler, esch_integer_check, esch_vertical_vector, IntegerCheck, SamplerReport,
};
