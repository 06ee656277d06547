use std::sync::Arc;

use super::{NumericsError, Result, Scalar};

/// Dense row-major tensor. Clones share the underlying buffer.
///
/// Public constructors reject non-finite values, so a tensor that came
/// through the public surface never holds NaN or infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T: Scalar = f64> {
    shape: Vec<usize>,
    data: Arc<Vec<T>>,
}

impl<T: Scalar> Tensor<T> {
    pub fn new(shape: Vec<usize>, data: Vec<T>) -> Result<Self> {
        let expect: usize = shape.iter().product();
        if shape.iter().any(|&d| d == 0) || expect != data.len() {
            return Err(NumericsError::ShapeMismatch {
                op: "tensor_new",
                detail: format!("shape {:?} does not describe {} values", shape, data.len()),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(NumericsError::NonFinite { op: "tensor_new" });
        }
        Ok(Self {
            shape,
            data: Arc::new(data),
        })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Self {
            shape,
            data: Arc::new(vec![T::zero(); n]),
        }
    }

    pub fn scalar(v: T) -> Result<Self> {
        Self::new(vec![1], vec![v])
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(usize) -> T) -> Result<Self> {
        let n: usize = shape.iter().product();
        Self::new(shape, (0..n).map(|i| f(i)).collect())
    }

    /// Same shape, values produced by the caller without a finiteness scan.
    /// Only reachable from inside the tape, which validates its own outputs.
    pub(crate) fn from_parts_unchecked(shape: Vec<usize>, data: Vec<T>) -> Self {
        debug_assert_eq!(shape.iter().product::<usize>(), data.len());
        Self {
            shape,
            data: Arc::new(data),
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Number of rows when viewed as a matrix; 1 for vectors.
    pub fn rows(&self) -> usize {
        if self.shape.len() == 2 {
            self.shape[0]
        } else {
            1
        }
    }

    /// Number of columns when viewed as a matrix; the length for vectors.
    pub fn cols(&self) -> usize {
        *self.shape.last().unwrap_or(&0)
    }

    pub fn is_matrix(&self) -> bool {
        self.shape.len() == 2
    }

    /// The single value of a one-element tensor.
    pub fn item(&self) -> Result<T> {
        if self.data.len() == 1 {
            Ok(self.data[0])
        } else {
            Err(NumericsError::ShapeMismatch {
                op: "item",
                detail: format!("expected one element, shape is {:?}", self.shape),
            })
        }
    }

    /// New tensor with `f` applied elementwise.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.shape.clone(), self.data.iter().map(|&v| f(v)).collect())
    }

    /// Copy of the tensor with the given flat entries set to zero.
    pub fn with_zeroed(&self, offsets: &[usize]) -> Result<Self> {
        let mut data = self.data.as_ref().clone();
        for &off in offsets {
            if off >= data.len() {
                return Err(NumericsError::BadIndex {
                    op: "with_zeroed",
                    index: off,
                    limit: data.len(),
                });
            }
            data[off] = T::zero();
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: Arc::new(data),
        })
    }

    /// True when both tensors hold bitwise-identical values.
    pub fn bit_eq(&self, other: &Self) -> bool
    where
        T: BitRepr,
    {
        self.shape == other.shape
            && self
                .data
                .iter()
                .zip(other.data.iter())
                .all(|(a, b)| a.bits_eq(b))
    }
}

/// Bit-level equality, used by determinism tests and the byte-diff oracle.
pub trait BitRepr {
    fn bits_eq(&self, other: &Self) -> bool;
}

impl BitRepr for f32 {
    fn bits_eq(&self, other: &Self) -> bool {
        self.to_bits() == other.to_bits()
    }
}

impl BitRepr for f64 {
    fn bits_eq(&self, other: &Self) -> bool {
        self.to_bits() == other.to_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_shape_data_disagreement() {
        let err = Tensor::new(vec![2, 3], vec![0.0f64; 5]);
        assert!(matches!(err, Err(NumericsError::ShapeMismatch { .. })));
    }

    #[test]
    fn new_rejects_non_finite() {
        let err = Tensor::new(vec![2], vec![1.0f64, f64::NAN]);
        assert!(matches!(err, Err(NumericsError::NonFinite { .. })));
        let err = Tensor::new(vec![1], vec![f64::INFINITY]);
        assert!(matches!(err, Err(NumericsError::NonFinite { .. })));
    }

    #[test]
    fn zeroed_copy_leaves_original_untouched() {
        let t = Tensor::new(vec![4], vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        let z = t.with_zeroed(&[1, 3]).unwrap();
        assert_eq!(z.data(), &[1.0, 0.0, 3.0, 0.0]);
        assert_eq!(t.data(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn with_zeroed_checks_bounds() {
        let t = Tensor::new(vec![2], vec![1.0f64, 2.0]).unwrap();
        assert!(matches!(
            t.with_zeroed(&[2]),
            Err(NumericsError::BadIndex { .. })
        ));
    }

    #[test]
    fn generic_over_f32() {
        let t: Tensor<f32> = Tensor::new(vec![2], vec![1.0, 2.0]).unwrap();
        assert_eq!(t.data(), &[1.0f32, 2.0]);
    }
}
