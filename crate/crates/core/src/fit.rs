//! Small numerical helpers shared by the report builders.

use num_complex::Complex64;

/// Ratio `exp(b)` of the least-squares line `ln y = a + b n` through the
/// positive points; `None` with fewer than two usable points.
pub(crate) fn geometric_ratio(points: impl IntoIterator<Item = (usize, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(_, y)| y > 0.0 && y.is_finite())
        .map(|(n, y)| (n as f64, y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some((sxy / sxx).exp())
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Accumulator carrying a double-double real part and imaginary part.
#[derive(Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add_real(acc: &mut (f64, f64), x: f64) {
        let (s, e) = two_sum(acc.0, x);
        acc.0 = s;
        acc.1 += e;
    }

    fn add_exact_product(acc: &mut (f64, f64), a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        Self::add_real(acc, p);
        acc.1 += e;
    }

    pub(crate) fn add(&mut self, x: Complex64) {
        Self::add_real(&mut self.re, x.re);
        Self::add_real(&mut self.im, x.im);
    }

    /// Adds `a * b` with each real product formed exactly.
    pub(crate) fn add_product(&mut self, a: Complex64, b: Complex64) {
        Self::add_exact_product(&mut self.re, a.re, b.re);
        Self::add_exact_product(&mut self.re, -a.im, b.im);
        Self::add_exact_product(&mut self.im, a.re, b.im);
        Self::add_exact_product(&mut self.im, a.im, b.re);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}
