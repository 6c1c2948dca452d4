/// Parses `start:stop:step` (stop included when it lands on the grid), a
/// comma list, or a single number. The result is non-empty and strictly
/// ascending.
pub fn parse_grid(input: &str) -> Result<Vec<f64>, String> {
    let input = input.trim();
    let values = if input.contains(':') {
        let parts: Vec<f64> = input.split(':').map(number).collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(format!("range '{input}' must be start:stop:step"));
        };
        if !(step > 0.0) {
            return Err(format!("range '{input}' needs a positive step"));
        }
        if stop < start {
            return Err(format!("range '{input}' has stop below start"));
        }
        // small slack so that e.g. 0:1:0.1 includes 1
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|k| start + k as f64 * step).collect()
    } else {
        input.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(format!("grid '{input}' is not strictly ascending"));
    }
    Ok(values)
}

fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("'{s}' is not a finite number")),
    }
}

pub fn parse_number(s: &str) -> Result<f64, String> {
    number(s)
}
