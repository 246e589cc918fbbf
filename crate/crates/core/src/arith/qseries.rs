use super::scalar::Scalar;

/// `(q;q)_n = (1 - q)(1 - q^2)...(1 - q^n)`; the empty product for `n = 0`.
pub fn q_pochhammer(q: &Scalar, n: usize) -> Scalar {
    let mut acc = Scalar::one();
    let mut qk = Scalar::one();
    for _ in 0..n {
        qk = &qk * q;
        acc = &acc * &(Scalar::one() - &qk);
    }
    acc
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_{n-k})`, zero for `k > n`.
pub fn q_binomial(q: &Scalar, n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    // product form avoids the full factorial-like quotient
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    for j in 0..k {
        num = &num * &(Scalar::one() - q.pow((n - j) as u32));
        den = &den * &(Scalar::one() - q.pow((j + 1) as u32));
    }
    &num / &den
}
