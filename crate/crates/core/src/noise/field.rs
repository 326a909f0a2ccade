use crate::spectrum::SpectrumSpec;

/// Evaluates `v(x) = Σ_k h_k φ_k(x) η_k`, its Jacobian, and the limiting
/// diffusion map `w ↦ f(x) A⁻¹ w`, reusing a gradient workspace.
#[derive(Debug, Clone)]
pub struct FieldEvaluator<'a> {
    spectrum: &'a SpectrumSpec,
    grad: Vec<f64>,
}

impl<'a> FieldEvaluator<'a> {
    pub fn new(spectrum: &'a SpectrumSpec) -> Self {
        FieldEvaluator { spectrum, grad: vec![0.0; spectrum.dim()] }
    }

    pub fn spectrum(&self) -> &'a SpectrumSpec {
        self.spectrum
    }

    /// `out = Σ_k c_k h_k φ_k(x)` for arbitrary mode coefficients `c`.
    #[inline]
    pub fn combine(&self, coeffs: &[f64], x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (m, c) in self.spectrum.modes().iter().zip(coeffs) {
            if *c == 0.0 {
                continue;
            }
            let s = c * m.phi.value(x);
            for (o, h) in out.iter_mut().zip(&m.direction) {
                *o += h * s;
            }
        }
    }

    pub fn field(&self, eta: &[f64], x: &[f64], out: &mut [f64]) {
        self.combine(eta, x, out)
    }

    /// Row-major `d × d` matrix with entries `Σ_k h_k[i] ∂ⱼφ_k(x) η_k`.
    pub fn jacobian(&mut self, eta: &[f64], x: &[f64], out: &mut [f64]) {
        let d = self.spectrum.dim();
        out.fill(0.0);
        for (m, e) in self.spectrum.modes().iter().zip(eta) {
            m.phi.value_and_gradient(x, &mut self.grad);
            for i in 0..d {
                let he = m.direction[i] * e;
                for j in 0..d {
                    out[i * d + j] += he * self.grad[j];
                }
            }
        }
    }

    /// `∇·v = Σ_k η_k (h_k · ∇φ_k)`.
    pub fn divergence(&mut self, eta: &[f64], x: &[f64]) -> f64 {
        let mut div = 0.0;
        for (m, e) in self.spectrum.modes().iter().zip(eta) {
            m.phi.value_and_gradient(x, &mut self.grad);
            let hg: f64 = m.direction.iter().zip(&self.grad).map(|(h, g)| h * g).sum();
            div += e * hg;
        }
        div
    }

    /// `out_i = Σ_k h_k[i] φ_k(x) w_k / α_k`.
    #[inline]
    pub fn diffusion(&self, x: &[f64], w: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (m, wk) in self.spectrum.modes().iter().zip(w) {
            if *wk == 0.0 {
                continue;
            }
            let s = m.phi.value(x) * wk / m.alpha;
            for (o, h) in out.iter_mut().zip(&m.direction) {
                *o += h * s;
            }
        }
    }
}

pub fn eval_field(spectrum: &SpectrumSpec, eta: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; spectrum.dim()];
    FieldEvaluator::new(spectrum).field(eta, x, &mut out);
    out
}

pub fn eval_field_jacobian(spectrum: &SpectrumSpec, eta: &[f64], x: &[f64]) -> Vec<f64> {
    let d = spectrum.dim();
    let mut out = vec![0.0; d * d];
    FieldEvaluator::new(spectrum).jacobian(eta, x, &mut out);
    out
}

pub fn diffusion_map(spectrum: &SpectrumSpec, x: &[f64], w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; spectrum.dim()];
    FieldEvaluator::new(spectrum).diffusion(x, w, &mut out);
    out
}
