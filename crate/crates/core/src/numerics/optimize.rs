/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
/// Returns `(x, f(x))` once the bracket is shorter than `tol` times its
/// midpoint magnitude (plus `tol`).
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + 0.5 * (a + b).abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_the_vertex_of_a_parabola() {
        let (x, fx) = golden_section(|x| (x - 1.3) * (x - 1.3) - 2.0, -5.0, 7.0, 1e-12);
        // flatness at the vertex limits x to about sqrt(machine epsilon)
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx + 2.0).abs() < 1e-15);
    }
}
