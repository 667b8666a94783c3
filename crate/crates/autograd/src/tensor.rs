use std::sync::Arc;

use crate::Element;

/// Dense tensor; clones share the underlying buffer.
#[derive(Clone)]
pub struct Tensor<E> {
    shape: Vec<usize>,
    data: Arc<Vec<E>>,
}

impl<E: Element> Tensor<E> {
    pub fn new(shape: Vec<usize>, data: Vec<E>) -> Self {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "shape {shape:?} does not match {} values",
            data.len()
        );
        debug_assert!(
            data.iter().all(|v| v.is_finite()),
            "tensor holds a non-finite value"
        );
        Self { shape, data: Arc::new(data) }
    }

    pub fn zeros(shape: &[usize]) -> Self {
        Self {
            shape: shape.to_vec(),
            data: Arc::new(vec![E::zero(); shape.iter().product()]),
        }
    }

    pub fn full(shape: &[usize], v: E) -> Self {
        Self {
            shape: shape.to_vec(),
            data: Arc::new(vec![v; shape.iter().product()]),
        }
    }

    pub fn scalar(v: E) -> Self {
        Self::new(vec![1], vec![v])
    }

    pub fn from_f64_slice(shape: &[usize], values: &[f64]) -> Self {
        Self::new(shape.to_vec(), values.iter().map(|&v| E::from_f64(v)).collect())
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

    pub fn data(&self) -> &[E] {
        &self.data
    }

    /// Single value of a one-element tensor.
    pub fn item(&self) -> E {
        assert_eq!(self.len(), 1, "item() on tensor of shape {:?}", self.shape);
        self.data[0]
    }

    /// Same buffer under a new shape (sizes must agree).
    pub fn reshaped(&self, shape: Vec<usize>) -> Self {
        assert_eq!(shape.iter().product::<usize>(), self.len());
        Self { shape, data: Arc::clone(&self.data) }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.to_f64()).collect()
    }

    /// Copy with one coordinate replaced (used by finite differences).
    pub fn with_value(&self, index: usize, v: E) -> Self {
        let mut data = self.data.as_ref().clone();
        data[index] = v;
        Self { shape: self.shape.clone(), data: Arc::new(data) }
    }

    pub fn map(&self, f: impl Fn(E) -> E) -> Self {
        Self {
            shape: self.shape.clone(),
            data: Arc::new(self.data.iter().map(|&v| f(v)).collect()),
        }
    }

    /// Element cast between precisions.
    pub fn cast<F: Element>(&self) -> Tensor<F> {
        Tensor::new(
            self.shape.clone(),
            self.data.iter().map(|v| F::from_f64(v.to_f64())).collect(),
        )
    }
}

impl<E: Element> std::fmt::Debug for Tensor<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tensor{:?}", self.shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reshape_shares_data() {
        let t = Tensor::<f64>::new(vec![2, 3], vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let r = t.reshaped(vec![6]);
        assert_eq!(r.shape(), &[6]);
        assert_eq!(r.data(), t.data());
    }

    #[test]
    #[should_panic]
    fn shape_mismatch_panics() {
        let _ = Tensor::<f32>::new(vec![2, 2], vec![1.0; 3]);
    }
}
