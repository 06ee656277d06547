use super::{NumericsError, Result, Scalar, Tensor};

/// Handle to a value recorded on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(usize);

/// One recorded primitive. Inputs are node ids; whatever the adjoint needs
/// beyond the node values themselves is stored inline.
enum Op<T: Scalar> {
    Leaf,
    MatMul { a: Var, b: Var },
    MatMulBt { a: Var, b: Var },
    Add { a: Var, b: Var },
    AddBias { x: Var, bias: Var },
    Scale { x: Var, factor: T },
    Gelu { x: Var },
    CausalSoftmax { x: Var },
    LayerNorm { x: Var, gamma: Var, beta: Var, mean: Vec<T>, rstd: Vec<T> },
    Embedding { table: Var, ids: Vec<usize> },
    SliceCols { x: Var, start: usize, len: usize },
    ConcatCols { parts: Vec<Var> },
    CrossEntropy { logits: Var, targets: Vec<usize>, weights: Vec<T>, probs: Vec<T> },
}

struct Node<T: Scalar> {
    value: Tensor<T>,
    op: Op<T>,
}

/// Ordered record of the primitives applied during a forward pass.
///
/// Replaying adjoints walks the record once, in reverse order, so gradients
/// are exact reverse-mode derivatives and bit-reproducible.
pub struct Tape<T: Scalar = f64> {
    nodes: Vec<Node<T>>,
}

impl<T: Scalar> Default for Tape<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Tape<T> {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Register an input value. Leaves are the only nodes gradients are
    /// usually read back from.
    pub fn leaf(&mut self, value: Tensor<T>) -> Var {
        self.push(value, Op::Leaf)
    }

    pub fn value(&self, var: Var) -> &Tensor<T> {
        &self.nodes[var.0].value
    }

    fn push(&mut self, value: Tensor<T>, op: Op<T>) -> Var {
        self.nodes.push(Node { value, op });
        Var(self.nodes.len() - 1)
    }

    fn output(&mut self, op_name: &'static str, shape: Vec<usize>, data: Vec<T>, op: Op<T>) -> Result<Var> {
        if !data.iter().all(|v| v.is_finite()) {
            return Err(NumericsError::NonFinite { op: op_name });
        }
        Ok(self.push(Tensor::from_parts_unchecked(shape, data), op))
    }

    fn mat(&self, op: &'static str, v: Var) -> Result<(usize, usize, &[T])> {
        let t = self.value(v);
        if t.is_matrix() {
            Ok((t.shape()[0], t.shape()[1], t.data()))
        } else {
            Err(NumericsError::ShapeMismatch {
                op,
                detail: format!("expected a matrix, got shape {:?}", t.shape()),
            })
        }
    }

    /// `a[m,k] * b[k,n] -> [m,n]`
    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (m, ka, _) = self.mat("matmul", a)?;
        let (kb, n, _) = self.mat("matmul", b)?;
        if ka != kb {
            return Err(NumericsError::ShapeMismatch {
                op: "matmul",
                detail: format!("inner dims {ka} vs {kb}"),
            });
        }
        let mut out = vec![T::zero(); m * n];
        {
            let ad = self.value(a).data();
            let bd = self.value(b).data();
            matmul_accum(&mut out, ad, bd, m, ka, n);
        }
        self.output("matmul", vec![m, n], out, Op::MatMul { a, b })
    }

    /// `a[m,k] * b[n,k]^T -> [m,n]` without materializing the transpose.
    pub fn matmul_bt(&mut self, a: Var, b: Var) -> Result<Var> {
        let (m, ka, _) = self.mat("matmul_bt", a)?;
        let (n, kb, _) = self.mat("matmul_bt", b)?;
        if ka != kb {
            return Err(NumericsError::ShapeMismatch {
                op: "matmul_bt",
                detail: format!("inner dims {ka} vs {kb}"),
            });
        }
        let mut out = vec![T::zero(); m * n];
        {
            let ad = self.value(a).data();
            let bd = self.value(b).data();
            matmul_bt_accum(&mut out, ad, bd, m, ka, n);
        }
        self.output("matmul_bt", vec![m, n], out, Op::MatMulBt { a, b })
    }

    /// Elementwise sum of two same-shape tensors.
    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        if self.value(a).shape() != self.value(b).shape() {
            return Err(NumericsError::ShapeMismatch {
                op: "add",
                detail: format!(
                    "{:?} vs {:?}",
                    self.value(a).shape(),
                    self.value(b).shape()
                ),
            });
        }
        let shape = self.value(a).shape().to_vec();
        let data = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(&x, &y)| x + y)
            .collect();
        self.output("add", shape, data, Op::Add { a, b })
    }

    /// `x[m,n] + bias[n]` broadcast over rows.
    pub fn add_bias(&mut self, x: Var, bias: Var) -> Result<Var> {
        let (m, n, _) = self.mat("add_bias", x)?;
        let bt = self.value(bias);
        if bt.shape() != [n] {
            return Err(NumericsError::ShapeMismatch {
                op: "add_bias",
                detail: format!("bias shape {:?} for {n} columns", bt.shape()),
            });
        }
        let mut data = self.value(x).data().to_vec();
        let bd = self.value(bias).data();
        for row in data.chunks_mut(n) {
            for (v, &b) in row.iter_mut().zip(bd) {
                *v += b;
            }
        }
        self.output("add_bias", vec![m, n], data, Op::AddBias { x, bias })
    }

    /// Multiply every element by a compile-time constant factor.
    pub fn scale(&mut self, x: Var, factor: T) -> Result<Var> {
        if !factor.is_finite() {
            return Err(NumericsError::NonFinite { op: "scale" });
        }
        let shape = self.value(x).shape().to_vec();
        let data = self.value(x).data().iter().map(|&v| v * factor).collect();
        self.output("scale", shape, data, Op::Scale { x, factor })
    }

    /// GELU nonlinearity, tanh form.
    pub fn gelu(&mut self, x: Var) -> Result<Var> {
        let shape = self.value(x).shape().to_vec();
        let data = self.value(x).data().iter().map(|&v| gelu(v)).collect();
        self.output("gelu", shape, data, Op::Gelu { x })
    }

    /// Row-wise softmax over the causal prefix: row `i` normalizes columns
    /// `0..=i` and zeroes the rest. Input must be square.
    pub fn causal_softmax(&mut self, x: Var) -> Result<Var> {
        let (m, n, xd) = self.mat("causal_softmax", x)?;
        if m != n {
            return Err(NumericsError::ShapeMismatch {
                op: "causal_softmax",
                detail: format!("expected square scores, got {m}x{n}"),
            });
        }
        let mut data = vec![T::zero(); m * n];
        for i in 0..m {
            let row = &xd[i * n..i * n + i + 1];
            let max = row.iter().fold(T::neg_infinity(), |acc, &v| acc.max(v));
            let mut denom = T::zero();
            let out = &mut data[i * n..i * n + i + 1];
            for (o, &v) in out.iter_mut().zip(row) {
                let e = (v - max).exp();
                *o = e;
                denom += e;
            }
            for o in out.iter_mut() {
                *o = *o / denom;
            }
        }
        self.output("causal_softmax", vec![m, n], data, Op::CausalSoftmax { x })
    }

    /// Layer normalization over each row with learned gain and shift.
    pub fn layer_norm(&mut self, x: Var, gamma: Var, beta: Var) -> Result<Var> {
        let (m, n, xd) = self.mat("layer_norm", x)?;
        for (name, v) in [("gamma", gamma), ("beta", beta)] {
            if self.value(v).shape() != [n] {
                return Err(NumericsError::ShapeMismatch {
                    op: "layer_norm",
                    detail: format!("{name} shape {:?} for {n} columns", self.value(v).shape()),
                });
            }
        }
        let eps = T::from_f64_lossy(1e-5);
        let inv_n = T::one() / T::from_f64_lossy(n as f64);
        let gd = self.value(gamma).data();
        let bd = self.value(beta).data();
        let mut data = vec![T::zero(); m * n];
        let mut means = vec![T::zero(); m];
        let mut rstds = vec![T::zero(); m];
        for i in 0..m {
            let row = &xd[i * n..(i + 1) * n];
            let mut mean = T::zero();
            for &v in row {
                mean += v;
            }
            mean = mean * inv_n;
            let mut var = T::zero();
            for &v in row {
                let d = v - mean;
                var += d * d;
            }
            let rstd = T::one() / (var * inv_n + eps).sqrt();
            means[i] = mean;
            rstds[i] = rstd;
            let out = &mut data[i * n..(i + 1) * n];
            for j in 0..n {
                out[j] = (row[j] - mean) * rstd * gd[j] + bd[j];
            }
        }
        self.output(
            "layer_norm",
            vec![m, n],
            data,
            Op::LayerNorm { x, gamma, beta, mean: means, rstd: rstds },
        )
    }

    /// Gather rows of `table[v,d]` by token id -> `[ids.len(), d]`.
    pub fn embedding(&mut self, table: Var, ids: &[usize]) -> Result<Var> {
        let (v, d, td) = self.mat("embedding", table)?;
        if ids.is_empty() {
            return Err(NumericsError::ShapeMismatch {
                op: "embedding",
                detail: "empty id list".into(),
            });
        }
        if let Some(&bad) = ids.iter().find(|&&id| id >= v) {
            return Err(NumericsError::BadIndex {
                op: "embedding",
                index: bad,
                limit: v,
            });
        }
        let mut data = Vec::with_capacity(ids.len() * d);
        for &id in ids {
            data.extend_from_slice(&td[id * d..(id + 1) * d]);
        }
        self.output(
            "embedding",
            vec![ids.len(), d],
            data,
            Op::Embedding { table, ids: ids.to_vec() },
        )
    }

    /// View of columns `start..start+len`.
    pub fn slice_cols(&mut self, x: Var, start: usize, len: usize) -> Result<Var> {
        let (m, n, xd) = self.mat("slice_cols", x)?;
        if start + len > n || len == 0 {
            return Err(NumericsError::ShapeMismatch {
                op: "slice_cols",
                detail: format!("columns {start}..{} of {n}", start + len),
            });
        }
        let mut data = Vec::with_capacity(m * len);
        for i in 0..m {
            data.extend_from_slice(&xd[i * n + start..i * n + start + len]);
        }
        self.output("slice_cols", vec![m, len], data, Op::SliceCols { x, start, len })
    }

    /// Concatenate same-height matrices along columns.
    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var> {
        if parts.is_empty() {
            return Err(NumericsError::ShapeMismatch {
                op: "concat_cols",
                detail: "no parts".into(),
            });
        }
        let (m, _, _) = self.mat("concat_cols", parts[0])?;
        let mut widths = Vec::with_capacity(parts.len());
        for &p in parts {
            let (mp, np, _) = self.mat("concat_cols", p)?;
            if mp != m {
                return Err(NumericsError::ShapeMismatch {
                    op: "concat_cols",
                    detail: format!("row counts {m} vs {mp}"),
                });
            }
            widths.push(np);
        }
        let n: usize = widths.iter().sum();
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            for (&p, &w) in parts.iter().zip(&widths) {
                let pd = self.value(p).data();
                data.extend_from_slice(&pd[i * w..(i + 1) * w]);
            }
        }
        self.output(
            "concat_cols",
            vec![m, n],
            data,
            Op::ConcatCols { parts: parts.to_vec() },
        )
    }

    /// Mean negative log-likelihood of `targets` under row-wise softmax of
    /// `logits`, weighted per row; rows with weight zero do not contribute.
    /// Returns a scalar node.
    pub fn cross_entropy(&mut self, logits: Var, targets: &[usize], weights: &[T]) -> Result<Var> {
        let (m, v, ld) = self.mat("cross_entropy", logits)?;
        if targets.len() != m || weights.len() != m {
            return Err(NumericsError::ShapeMismatch {
                op: "cross_entropy",
                detail: format!("{m} rows, {} targets, {} weights", targets.len(), weights.len()),
            });
        }
        if let Some(&bad) = targets.iter().find(|&&t| t >= v) {
            return Err(NumericsError::BadIndex {
                op: "cross_entropy",
                index: bad,
                limit: v,
            });
        }
        let mut wsum = T::zero();
        for &w in weights {
            if w < T::zero() || !w.is_finite() {
                return Err(NumericsError::NonFinite { op: "cross_entropy" });
            }
            wsum += w;
        }
        if wsum <= T::zero() {
            return Err(NumericsError::ShapeMismatch {
                op: "cross_entropy",
                detail: "weights sum to zero".into(),
            });
        }
        let mut probs = vec![T::zero(); m * v];
        let mut loss = T::zero();
        for i in 0..m {
            let row = &ld[i * v..(i + 1) * v];
            let max = row.iter().fold(T::neg_infinity(), |acc, &x| acc.max(x));
            let mut denom = T::zero();
            for &x in row {
                denom += (x - max).exp();
            }
            let lse = max + denom.ln();
            let p = &mut probs[i * v..(i + 1) * v];
            for (o, &x) in p.iter_mut().zip(row) {
                *o = (x - lse).exp();
            }
            loss += weights[i] * (lse - row[targets[i]]);
        }
        loss = loss / wsum;
        let norm_weights: Vec<T> = weights.iter().map(|&w| w / wsum).collect();
        self.output(
            "cross_entropy",
            vec![1],
            vec![loss],
            Op::CrossEntropy { logits, targets: targets.to_vec(), weights: norm_weights, probs },
        )
    }

    /// Reverse-mode sweep from a scalar `loss` node. Returns one gradient
    /// buffer per node; untouched nodes read back as zeros.
    pub fn backward(&self, loss: Var) -> Result<Gradients<T>> {
        let lt = self.value(loss);
        if lt.len() != 1 {
            return Err(NumericsError::NonScalarLoss(lt.shape().to_vec()));
        }
        if !lt.data()[0].is_finite() {
            return Err(NumericsError::NonFiniteLoss);
        }
        let mut grads: Vec<Option<Vec<T>>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(vec![T::one()]);

        for idx in (0..=loss.0).rev() {
            let Some(dy) = grads[idx].take() else {
                continue;
            };
            let node = &self.nodes[idx];
            match &node.op {
                Op::Leaf => {
                    grads[idx] = Some(dy);
                    continue;
                }
                Op::MatMul { a, b } => {
                    let (m, k, ad) = self.mat("bwd", *a)?;
                    let (_, n, bd) = self.mat("bwd", *b)?;
                    // dA += dY * B^T
                    let da = grad_buf(&mut grads, a.0, m * k);
                    matmul_bt_accum(da, &dy, bd, m, n, k);
                    // dB += A^T * dY  (loop order keeps accumulation fixed)
                    let db = grad_buf(&mut grads, b.0, k * n);
                    for i in 0..m {
                        let dyrow = &dy[i * n..(i + 1) * n];
                        for kk in 0..k {
                            let aik = ad[i * k + kk];
                            let dst = &mut db[kk * n..(kk + 1) * n];
                            for (d, &g) in dst.iter_mut().zip(dyrow) {
                                *d += aik * g;
                            }
                        }
                    }
                }
                Op::MatMulBt { a, b } => {
                    let (m, k, ad) = self.mat("bwd", *a)?;
                    let (n, _, bd) = self.mat("bwd", *b)?;
                    // dA += dY * B
                    let da = grad_buf(&mut grads, a.0, m * k);
                    matmul_accum(da, &dy, bd, m, n, k);
                    // dB[j,:] += sum_i dY[i,j] * A[i,:]
                    let db = grad_buf(&mut grads, b.0, n * k);
                    for i in 0..m {
                        let arow = &ad[i * k..(i + 1) * k];
                        for j in 0..n {
                            let g = dy[i * n + j];
                            let dst = &mut db[j * k..(j + 1) * k];
                            for (d, &av) in dst.iter_mut().zip(arow) {
                                *d += g * av;
                            }
                        }
                    }
                }
                Op::Add { a, b } => {
                    accum(grad_buf(&mut grads, a.0, dy.len()), &dy);
                    accum(grad_buf(&mut grads, b.0, dy.len()), &dy);
                }
                Op::AddBias { x, bias } => {
                    let n = self.value(*bias).len();
                    accum(grad_buf(&mut grads, x.0, dy.len()), &dy);
                    let db = grad_buf(&mut grads, bias.0, n);
                    for row in dy.chunks(n) {
                        accum(db, row);
                    }
                }
                Op::Scale { x, factor } => {
                    let dx = grad_buf(&mut grads, x.0, dy.len());
                    for (d, &g) in dx.iter_mut().zip(&dy) {
                        *d += *factor * g;
                    }
                }
                Op::Gelu { x } => {
                    let xd = self.value(*x).data();
                    let dx = grad_buf(&mut grads, x.0, dy.len());
                    for i in 0..dy.len() {
                        dx[i] += gelu_derivative(xd[i]) * dy[i];
                    }
                }
                Op::CausalSoftmax { x } => {
                    let n = node.value.shape()[1];
                    let yd = node.value.data();
                    let dx = grad_buf(&mut grads, x.0, dy.len());
                    for i in 0..n {
                        let y = &yd[i * n..i * n + i + 1];
                        let g = &dy[i * n..i * n + i + 1];
                        let mut dot = T::zero();
                        for (yv, gv) in y.iter().zip(g) {
                            dot += *yv * *gv;
                        }
                        let out = &mut dx[i * n..i * n + i + 1];
                        for j in 0..=i {
                            out[j] += y[j] * (g[j] - dot);
                        }
                    }
                }
                Op::LayerNorm { x, gamma, beta, mean, rstd } => {
                    let (m, n, xd) = self.mat("bwd", *x)?;
                    let gd = self.value(*gamma).data().to_vec();
                    let inv_n = T::one() / T::from_f64_lossy(n as f64);
                    {
                        let dbeta = grad_buf(&mut grads, beta.0, n);
                        for row in dy.chunks(n) {
                            accum(dbeta, row);
                        }
                    }
                    {
                        let dgamma = grad_buf(&mut grads, gamma.0, n);
                        for i in 0..m {
                            let row = &xd[i * n..(i + 1) * n];
                            let dyr = &dy[i * n..(i + 1) * n];
                            for j in 0..n {
                                dgamma[j] += dyr[j] * (row[j] - mean[i]) * rstd[i];
                            }
                        }
                    }
                    let dx = grad_buf(&mut grads, x.0, m * n);
                    for i in 0..m {
                        let row = &xd[i * n..(i + 1) * n];
                        let dyr = &dy[i * n..(i + 1) * n];
                        let mut sum_dxhat = T::zero();
                        let mut sum_dxhat_xhat = T::zero();
                        for j in 0..n {
                            let xhat = (row[j] - mean[i]) * rstd[i];
                            let dxhat = dyr[j] * gd[j];
                            sum_dxhat += dxhat;
                            sum_dxhat_xhat += dxhat * xhat;
                        }
                        let out = &mut dx[i * n..(i + 1) * n];
                        for j in 0..n {
                            let xhat = (row[j] - mean[i]) * rstd[i];
                            let dxhat = dyr[j] * gd[j];
                            out[j] += rstd[i]
                                * (dxhat - inv_n * sum_dxhat - xhat * inv_n * sum_dxhat_xhat);
                        }
                    }
                }
                Op::Embedding { table, ids } => {
                    let (_, d, _) = self.mat("bwd", *table)?;
                    let vlen = self.value(*table).len();
                    let dt = grad_buf(&mut grads, table.0, vlen);
                    for (i, &id) in ids.iter().enumerate() {
                        let src = &dy[i * d..(i + 1) * d];
                        accum(&mut dt[id * d..(id + 1) * d], src);
                    }
                }
                Op::SliceCols { x, start, len } => {
                    let (m, n, _) = self.mat("bwd", *x)?;
                    let dx = grad_buf(&mut grads, x.0, m * n);
                    for i in 0..m {
                        let src = &dy[i * len..(i + 1) * len];
                        accum(&mut dx[i * n + start..i * n + start + len], src);
                    }
                }
                Op::ConcatCols { parts } => {
                    let m = node.value.shape()[0];
                    let n = node.value.shape()[1];
                    let widths: Vec<usize> =
                        parts.iter().map(|&p| self.value(p).shape()[1]).collect();
                    for (pi, &p) in parts.iter().enumerate() {
                        let w = widths[pi];
                        let off: usize = widths[..pi].iter().sum();
                        let dp = grad_buf(&mut grads, p.0, m * w);
                        for i in 0..m {
                            let src = &dy[i * n + off..i * n + off + w];
                            accum(&mut dp[i * w..(i + 1) * w], src);
                        }
                    }
                }
                Op::CrossEntropy { logits, targets, weights, probs } => {
                    let (m, v, _) = self.mat("bwd", *logits)?;
                    let seed = dy[0];
                    let dl = grad_buf(&mut grads, logits.0, m * v);
                    for i in 0..m {
                        if weights[i] == T::zero() {
                            continue;
                        }
                        let scale = seed * weights[i];
                        let p = &probs[i * v..(i + 1) * v];
                        let out = &mut dl[i * v..(i + 1) * v];
                        for j in 0..v {
                            out[j] += scale * p[j];
                        }
                        out[targets[i]] -= scale;
                    }
                }
            }
            grads[idx] = None;
        }
        Ok(Gradients { grads })
    }
}

/// Per-node gradient buffers produced by [`Tape::backward`].
pub struct Gradients<T: Scalar = f64> {
    grads: Vec<Option<Vec<T>>>,
}

impl<T: Scalar> Gradients<T> {
    /// Gradient for `var`, shaped like its value; zeros if the node did not
    /// influence the loss.
    pub fn get(&self, var: Var, shape_of: &Tensor<T>) -> Tensor<T> {
        match &self.grads[var.0] {
            Some(buf) => Tensor::from_parts_unchecked(shape_of.shape().to_vec(), buf.clone()),
            None => Tensor::zeros(shape_of.shape().to_vec()),
        }
    }

    pub fn take(&mut self, var: Var, len: usize) -> Vec<T> {
        self.grads[var.0].take().unwrap_or_else(|| vec![T::zero(); len])
    }
}

fn grad_buf<T: Scalar>(grads: &mut [Option<Vec<T>>], idx: usize, len: usize) -> &mut Vec<T> {
    grads[idx].get_or_insert_with(|| vec![T::zero(); len])
}

fn accum<T: Scalar>(dst: &mut [T], src: &[T]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

/// `out[m,n] += a[m,k] * b[k,n]`, ikj order: the inner loop has no
/// cross-iteration dependence, so it vectorizes without reassociation.
fn matmul_accum<T: Scalar>(out: &mut [T], a: &[T], b: &[T], m: usize, k: usize, n: usize) {
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let orow = &mut out[i * n..(i + 1) * n];
        for (kk, &aik) in arow.iter().enumerate() {
            let brow = &b[kk * n..(kk + 1) * n];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
}

/// `out[m,n] += a[m,k] * b[n,k]^T` as row-dot-row products. The dot uses
/// four fixed-stride accumulators; the summation order is input-independent.
fn matmul_bt_accum<T: Scalar>(out: &mut [T], a: &[T], b: &[T], m: usize, k: usize, n: usize) {
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let orow = &mut out[i * n..(i + 1) * n];
        for j in 0..n {
            let brow = &b[j * k..(j + 1) * k];
            orow[j] += dot(arow, brow);
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let chunks = a.len() / 4 * 4;
    let mut acc = [T::zero(); 4];
    let mut i = 0;
    while i < chunks {
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
        i += 4;
    }
    let mut tail = T::zero();
    while i < a.len() {
        tail += a[i] * b[i];
        i += 1;
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail
}

fn gelu<T: Scalar>(x: T) -> T {
    let half = T::from_f64_lossy(0.5);
    let c = T::from_f64_lossy(0.044715);
    let s = T::from_f64_lossy(0.7978845608028654); // sqrt(2/pi)
    let u = s * (x + c * x * x * x);
    half * x * (T::one() + u.tanh())
}

fn gelu_derivative<T: Scalar>(x: T) -> T {
    let half = T::from_f64_lossy(0.5);
    let c = T::from_f64_lossy(0.044715);
    let s = T::from_f64_lossy(0.7978845608028654);
    let three = T::from_f64_lossy(3.0);
    let u = s * (x + c * x * x * x);
    let t = u.tanh();
    let sech2 = T::one() - t * t;
    half * (T::one() + t) + half * x * sech2 * s * (T::one() + three * c * x * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(shape: &[usize], data: &[f64]) -> Tensor<f64> {
        Tensor::new(shape.to_vec(), data.to_vec()).unwrap()
    }

    #[test]
    fn matmul_matches_hand_computation() {
        let mut tape = Tape::new();
        let a = tape.leaf(t(&[2, 3], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]));
        let b = tape.leaf(t(&[3, 2], &[7.0, 8.0, 9.0, 10.0, 11.0, 12.0]));
        let c = tape.matmul(a, b).unwrap();
        assert_eq!(tape.value(c).data(), &[58.0, 64.0, 139.0, 154.0]);
    }

    #[test]
    fn matmul_rejects_inner_dim_mismatch() {
        let mut tape = Tape::new();
        let a = tape.leaf(t(&[2, 3], &[0.0; 6]));
        let b = tape.leaf(t(&[2, 2], &[0.0; 4]));
        assert!(matches!(
            tape.matmul(a, b),
            Err(NumericsError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn dot_with_self_gradient_is_two_theta() {
        // loss = theta . theta over [1, 2] -> grad [2, 4]
        let mut tape = Tape::new();
        let theta = tape.leaf(t(&[1, 2], &[1.0, 2.0]));
        let loss = tape.matmul_bt(theta, theta).unwrap();
        assert_eq!(tape.value(loss).data(), &[5.0]);
        let grads = tape.backward(loss).unwrap();
        let g = grads.get(theta, tape.value(theta));
        assert_eq!(g.data(), &[2.0, 4.0]);
    }

    #[test]
    fn constant_loss_has_zero_gradient() {
        let mut tape = Tape::new();
        let theta = tape.leaf(t(&[1, 3], &[0.5, -1.0, 2.0]));
        let loss = tape.leaf(Tensor::scalar(5.0).unwrap());
        let grads = tape.backward(loss).unwrap();
        let g = grads.get(theta, tape.value(theta));
        assert_eq!(g.data(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn causal_softmax_rows_sum_to_one_over_prefix() {
        let mut tape = Tape::new();
        let x = tape.leaf(t(&[3, 3], &[1.0, 9.0, 9.0, 0.5, 0.5, 9.0, 1.0, 2.0, 3.0]));
        let y = tape.causal_softmax(x).unwrap();
        let d = tape.value(y).data();
        assert_eq!(d[0], 1.0); // row 0 sees only column 0
        assert_eq!(&d[1..3], &[0.0, 0.0]);
        assert!((d[3] - 0.5).abs() < 1e-12 && (d[4] - 0.5).abs() < 1e-12);
        let row2: f64 = d[6..9].iter().sum();
        assert!((row2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_entropy_of_uniform_logits_is_log_vocab() {
        let mut tape = Tape::new();
        let logits = tape.leaf(t(&[2, 4], &[0.0; 8]));
        let loss = tape.cross_entropy(logits, &[1, 3], &[1.0, 1.0]).unwrap();
        let got = tape.value(loss).item().unwrap();
        assert!((got - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cross_entropy_ignores_zero_weight_rows() {
        let mut tape = Tape::new();
        let logits = tape.leaf(t(&[2, 3], &[5.0, 0.0, 0.0, 0.0, 0.0, 5.0]));
        let full = tape.cross_entropy(logits, &[0, 0], &[1.0, 0.0]).unwrap();
        let mut tape2 = Tape::new();
        let l2 = tape2.leaf(t(&[1, 3], &[5.0, 0.0, 0.0]));
        let only = tape2.cross_entropy(l2, &[0], &[1.0]).unwrap();
        assert_eq!(
            tape.value(full).item().unwrap(),
            tape2.value(only).item().unwrap()
        );
    }

    #[test]
    fn backward_rejects_non_scalar_loss() {
        let mut tape = Tape::new();
        let x = tape.leaf(t(&[1, 2], &[1.0, 2.0]));
        assert!(matches!(
            tape.backward(x),
            Err(NumericsError::NonScalarLoss(_))
        ));
    }

    #[test]
    fn embedding_rejects_out_of_range_ids() {
        let mut tape = Tape::new();
        let table = tape.leaf(t(&[2, 2], &[1.0, 2.0, 3.0, 4.0]));
        assert!(matches!(
            tape.embedding(table, &[2]),
            Err(NumericsError::BadIndex { .. })
        ));
    }

    #[test]
    fn gradients_are_bit_identical_across_runs() {
        let run = || {
            let mut tape = Tape::new();
            let x = tape.leaf(t(&[2, 2], &[0.3, -0.7, 1.1, 0.2]));
            let w = tape.leaf(t(&[2, 2], &[0.5, 0.1, -0.4, 0.9]));
            let h = tape.matmul(x, w).unwrap();
            let g = tape.gelu(h).unwrap();
            let loss = tape.cross_entropy(g, &[0, 1], &[1.0, 1.0]).unwrap();
            let grads = tape.backward(loss).unwrap();
            grads.get(w, tape.value(w)).data().to_vec()
        };
        let a = run();
        let b = run();
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
