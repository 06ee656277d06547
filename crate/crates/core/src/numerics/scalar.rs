use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar a tensor can hold: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssignOps + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for literals inside generic kernels.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal must convert to scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
