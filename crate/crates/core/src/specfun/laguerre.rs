/// Generalized Laguerre polynomial L_n^{(α)}(x) by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(laguerre(0, 0.0, 3.7), 1.0);
        assert_eq!(laguerre(1, 0.0, 3.7), 1.0 - 3.7);
        let x: f64 = 0.8;
        let l2 = 0.5 * (x * x - 4.0 * x + 2.0);
        assert!((laguerre(2, 0.0, x) - l2).abs() < 1e-15);
        // L_1^{(α)} = 1 + α − x
        assert!((laguerre(1, 2.5, x) - (3.5 - x)).abs() < 1e-15);
    }
}
