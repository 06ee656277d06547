use super::{NumericsError, Result, Scalar, Tape, Tensor, Var};

/// Evaluate `loss_fn` over leaves built from `params` and return the loss
/// together with one gradient tensor per parameter, aligned by position.
///
/// The gradient is the exact reverse-mode derivative of the recorded
/// computation; identical inputs give bit-identical outputs.
pub fn grad<T, F>(params: &[Tensor<T>], loss_fn: F) -> Result<(T, Vec<Tensor<T>>)>
where
    T: Scalar,
    F: FnOnce(&mut Tape<T>, &[Var]) -> Result<Var>,
{
    let mut tape = Tape::new();
    let vars: Vec<Var> = params.iter().map(|p| tape.leaf(p.clone())).collect();
    let loss = loss_fn(&mut tape, &vars)?;
    let value = tape.value(loss).item().map_err(|_| {
        NumericsError::NonScalarLoss(tape.value(loss).shape().to_vec())
    })?;
    if !value.is_finite() {
        return Err(NumericsError::NonFiniteLoss);
    }
    let grads = tape.backward(loss)?;
    let out = vars
        .iter()
        .zip(params)
        .map(|(&v, p)| grads.get(v, p))
        .collect();
    Ok((value, out))
}

/// Compare the reverse-mode gradient of `loss_fn` against central finite
/// differences at step `epsilon`, sweeping every parameter entry.
///
/// Returns `max over entries of |analytic - numeric| / max(1e-12, |analytic| + |numeric|)`.
pub fn finite_difference_check<T, F>(params: &[Tensor<T>], loss_fn: F, epsilon: T) -> Result<T>
where
    T: Scalar,
    F: Fn(&mut Tape<T>, &[Var]) -> Result<Var>,
{
    if epsilon <= T::zero() {
        return Err(NumericsError::InvalidEpsilon);
    }
    let (_, analytic) = grad(params, &loss_fn)?;

    let eval = |perturbed: &[Tensor<T>]| -> Result<T> {
        let mut tape = Tape::new();
        let vars: Vec<Var> = perturbed.iter().map(|p| tape.leaf(p.clone())).collect();
        let loss = loss_fn(&mut tape, &vars)?;
        let v = tape.value(loss).item().map_err(|_| {
            NumericsError::NonScalarLoss(tape.value(loss).shape().to_vec())
        })?;
        if !v.is_finite() {
            return Err(NumericsError::NonFiniteLoss);
        }
        Ok(v)
    };

    let floor = T::from_f64_lossy(1e-12);
    let two = T::from_f64_lossy(2.0);
    let mut worst = T::zero();
    let mut work: Vec<Tensor<T>> = params.to_vec();
    for pi in 0..params.len() {
        for off in 0..params[pi].len() {
            let orig = params[pi].data()[off];
            let bump = |v: T, w: &mut Vec<Tensor<T>>| -> Result<()> {
                let mut data = params[pi].data().to_vec();
                data[off] = v;
                w[pi] = Tensor::new(params[pi].shape().to_vec(), data)?;
                Ok(())
            };
            bump(orig + epsilon, &mut work)?;
            let plus = eval(&work)?;
            bump(orig - epsilon, &mut work)?;
            let minus = eval(&work)?;
            work[pi] = params[pi].clone();

            let numeric = (plus - minus) / (two * epsilon);
            let a = analytic[pi].data()[off];
            let denom = floor.max(a.abs() + numeric.abs());
            let rel = (a - numeric).abs() / denom;
            if rel > worst {
                worst = rel;
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn randt(rng: &mut ChaCha8Rng, shape: &[usize]) -> Tensor<f64> {
        Tensor::from_fn(shape.to_vec(), |_| rng.gen_range(-1.0..1.0)).unwrap()
    }

    #[test]
    fn quadratic_matches_finite_differences_tightly() {
        // loss = theta^2 at theta = 3; central differences are exact for
        // quadratics up to rounding.
        let theta = Tensor::new(vec![1, 1], vec![3.0]).unwrap();
        let err = finite_difference_check(
            &[theta],
            |tape, vars| tape.matmul_bt(vars[0], vars[0]),
            1e-5,
        )
        .unwrap();
        assert!(err <= 1e-8, "relative error {err}");
    }

    #[test]
    fn zero_epsilon_rejected() {
        let theta = Tensor::new(vec![1, 1], vec![3.0]).unwrap();
        let err = finite_difference_check(
            &[theta],
            |tape, vars| tape.matmul_bt(vars[0], vars[0]),
            0.0,
        );
        assert!(matches!(err, Err(NumericsError::InvalidEpsilon)));
    }

    #[test]
    fn random_two_layer_mlp_17_params() {
        // w1[2,3] + b1[3] + w2[3,2] + b2[2] = 17 parameters.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = vec![
            randt(&mut rng, &[2, 3]),
            randt(&mut rng, &[3]),
            randt(&mut rng, &[3, 2]),
            randt(&mut rng, &[2]),
        ];
        let x = randt(&mut rng, &[1, 2]);
        let err = finite_difference_check(
            &params,
            move |tape, vars| {
                let xv = tape.leaf(x.clone());
                let h = tape.matmul(xv, vars[0])?;
                let h = tape.add_bias(h, vars[1])?;
                let h = tape.gelu(h)?;
                let h = tape.matmul(h, vars[2])?;
                let h = tape.add_bias(h, vars[3])?;
                tape.cross_entropy(h, &[1], &[1.0])
            },
            1e-5,
        )
        .unwrap();
        assert!(err <= 1e-4, "relative error {err}");
    }

    #[test]
    fn softmax_cross_entropy_head_50_params_converges_in_epsilon() {
        // w1[3,5] + b1[5] + w2[5,6] = 50 parameters; run at two epsilons to
        // confirm the finite-difference error keeps shrinking.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let params = vec![
            randt(&mut rng, &[3, 5]),
            randt(&mut rng, &[5]),
            randt(&mut rng, &[5, 6]),
        ];
        let x = randt(&mut rng, &[2, 3]);
        let loss = move |tape: &mut Tape<f64>, vars: &[Var]| {
            let xv = tape.leaf(x.clone());
            let h = tape.matmul(xv, vars[0])?;
            let h = tape.add_bias(h, vars[1])?;
            let h = tape.gelu(h)?;
            let logits = tape.matmul(h, vars[2])?;
            tape.cross_entropy(logits, &[2, 4], &[1.0, 1.0])
        };
        let coarse = finite_difference_check(&params, &loss, 1e-4).unwrap();
        let fine = finite_difference_check(&params, &loss, 1e-5).unwrap();
        assert!(fine <= 1e-4, "relative error {fine}");
        assert!(fine <= coarse * 10.0, "no convergence: {coarse} -> {fine}");
    }

    #[test]
    fn adjoint_accumulation_is_linear() {
        // grad(a*f + b*g) == a*grad(f) + b*grad(g)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = randt(&mut rng, &[2, 2]);
            let x = randt(&mut rng, &[1, 2]);
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));

            let f = |tape: &mut Tape<f64>, vars: &[Var], x: &Tensor<f64>| {
                let xv = tape.leaf(x.clone());
                let h = tape.matmul(xv, vars[0])?;
                tape.cross_entropy(h, &[1], &[1.0])
            };
            let g = |tape: &mut Tape<f64>, vars: &[Var], x: &Tensor<f64>| {
                let xv = tape.leaf(x.clone());
                let h = tape.matmul(xv, vars[0])?;
                let h = tape.gelu(h)?;
                tape.cross_entropy(h, &[0], &[1.0])
            };

            let (_, gf) = grad(std::slice::from_ref(&w), |t, v| f(t, v, &x)).unwrap();
            let (_, gg) = grad(std::slice::from_ref(&w), |t, v| g(t, v, &x)).unwrap();
            let (_, gc) = grad(std::slice::from_ref(&w), |t, v| {
                let lf = f(t, v, &x)?;
                let lg = g(t, v, &x)?;
                let sa = t.scale(lf, a)?;
                let sb = t.scale(lg, b)?;
                t.add(sa, sb)
            })
            .unwrap();

            for i in 0..4 {
                let want = a * gf[0].data()[i] + b * gg[0].data()[i];
                let got = gc[0].data()[i];
                let denom = 1e-12f64.max(want.abs() + got.abs());
                assert!((want - got).abs() / denom < 1e-10);
            }
        }
    }

    #[test]
    fn every_primitive_matches_finite_differences_on_randomized_shapes() {
        // 100 randomized seeds per primitive, tiny shapes.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..100u64 {
            let m = rng.gen_range(1..4usize);
            let k = rng.gen_range(1..4usize);
            let n = rng.gen_range(2..5usize);
            let _ = seed;

            // matmul + add_bias + gelu + cross_entropy
            let params = vec![randt(&mut rng, &[m, k]), randt(&mut rng, &[k, n]), randt(&mut rng, &[n])];
            let targets: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
            let t1 = targets.clone();
            let err = finite_difference_check(
                &params,
                move |tape, v| {
                    let h = tape.matmul(v[0], v[1])?;
                    let h = tape.add_bias(h, v[2])?;
                    let h = tape.gelu(h)?;
                    tape.cross_entropy(h, &t1, &vec![1.0; t1.len()])
                },
                1e-5,
            )
            .unwrap();
            assert!(err <= 1e-4, "mlp chain err {err}");

            // matmul_bt + causal_softmax + scale + add
            let q = randt(&mut rng, &[n, k]);
            let kk = randt(&mut rng, &[n, k]);
            let t2 = (0..n).map(|_| rng.gen_range(0..n)).collect::<Vec<_>>();
            let err = finite_difference_check(
                &[q, kk],
                move |tape, v| {
                    let scores = tape.matmul_bt(v[0], v[1])?;
                    let scores = tape.scale(scores, 0.5)?;
                    let attn = tape.causal_softmax(scores)?;
                    let mixed = tape.add(attn, attn)?;
                    tape.cross_entropy(mixed, &t2, &vec![1.0; t2.len()])
                },
                1e-5,
            )
            .unwrap();
            assert!(err <= 1e-4, "attention chain err {err}");

            // embedding + layer_norm + slice/concat
            let vocab = rng.gen_range(3..6usize);
            let d = 4usize;
            let table = randt(&mut rng, &[vocab, d]);
            let gamma = Tensor::from_fn(vec![d], |_| rng.gen_range(0.5..1.5)).unwrap();
            let beta = randt(&mut rng, &[d]);
            let ids: Vec<usize> = (0..m).map(|_| rng.gen_range(0..vocab)).collect();
            let t3: Vec<usize> = (0..m).map(|_| rng.gen_range(0..d)).collect();
            let err = finite_difference_check(
                &[table, gamma, beta],
                move |tape, v| {
                    let e = tape.embedding(v[0], &ids)?;
                    let nrm = tape.layer_norm(e, v[1], v[2])?;
                    let lo = tape.slice_cols(nrm, 0, 2)?;
                    let hi = tape.slice_cols(nrm, 2, 2)?;
                    let back = tape.concat_cols(&[lo, hi])?;
                    tape.cross_entropy(back, &t3, &vec![1.0; t3.len()])
                },
                1e-5,
            )
            .unwrap();
            assert!(err <= 1e-4, "embedding chain err {err}");
        }
    }
}
