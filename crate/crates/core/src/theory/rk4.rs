/// One classical fourth-order Runge-Kutta step of size `h` from `(t, y)`.
///
/// The right-hand side may fail; the first error aborts the step.
pub fn rk4_step<const D: usize, E, F>(
    f: &mut F,
    t: f64,
    y: &[f64; D],
    h: f64,
) -> Result<[f64; D], E>
where
    F: FnMut(f64, &[f64; D]) -> Result<[f64; D], E>,
{
    let offset = |k: &[f64; D], c: f64| {
        let mut out = *y;
        out.iter_mut().zip(k).for_each(|(o, ki)| *o += c * ki);
        out
    };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &offset(&k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &offset(&k2, 0.5 * h))?;
    let k4 = f(t + h, &offset(&k3, h))?;
    let mut out = *y;
    for i in 0..D {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}
