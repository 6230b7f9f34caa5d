//! WebAssembly bindings for the static demo page in `www/`.

use polarsp::channel::{joint_from, ChannelSpec, InputDist};
use polarsp::construction::code_profile;
use polarsp::harness::{polarize_rows, ExperimentConfig, MuSetting};
use polarsp::transform::{Mode, Pattern};
use wasm_bindgen::prelude::*;

fn parse(channel: &str, mode: &str) -> Result<(ChannelSpec, Mode), String> {
    let ch = channel.parse::<ChannelSpec>().map_err(|e| e.to_string())?;
    let mode = mode.parse::<Mode>().map_err(|e| e.to_string())?;
    Ok((ch, mode))
}

fn mu_of(mu: u32) -> Option<usize> {
    (mu > 0).then_some(mu as usize)
}

/// Bhattacharyya parameters of the `m` synthesized channels.
pub fn z_values(m: usize, channel: &str, mode: &str, mu: u32) -> Result<Vec<f64>, String> {
    let (ch, mode) = parse(channel, mode)?;
    let w = joint_from(InputDist::uniform(), &ch.channel().map_err(|e| e.to_string())?);
    code_profile(m, &w, mode, mu_of(mu))
        .map(|p| p.z)
        .map_err(|e| e.to_string())
}

/// `[M, fraction_good_Z, 1 - H(X|Y)]` per length, flattened.
pub fn polarization(
    lengths: &[usize],
    channel: &str,
    mode: &str,
    mu: u32,
    beta: f64,
) -> Result<Vec<f64>, String> {
    parse(channel, mode)?;
    let cfg = ExperimentConfig {
        channel: Some(channel.into()),
        m: Some(lengths.to_vec()),
        mode: Some(mode.into()),
        mu: Some(if mu == 0 { MuSetting::Word("inf".into()) } else { MuSetting::Count(mu as usize) }),
        beta: Some(beta),
        ..Default::default()
    };
    let rows = polarize_rows(&cfg).map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.m as f64, r.fraction_good_z, 1.0 - r.hxy])
        .collect())
}

/// Lines describing the extended transform of `bits`: the removed
/// positions, the extended word and the transformed word with `s`/`p`.
pub fn transform_text(mode: &str, bits: &str) -> Result<String, String> {
    let mode = mode.parse::<Mode>().map_err(|e| e.to_string())?;
    let x: Vec<u8> = bits
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(format!("not a bit: {c:?}")),
        })
        .collect::<Result<_, _>>()?;
    let p = Pattern::new(x.len(), mode).map_err(|e| e.to_string())?;
    let ext = p.extend(&x).map_err(|e| e.to_string())?;
    let u = p.extended_transform(&x).map_err(|e| e.to_string())?;
    let show = |v: &[polarsp::transform::ExtBit]| v.iter().map(|b| b.symbol()).collect::<String>();
    let removed: Vec<String> = p.indices.iter().map(|i| i.to_string()).collect();
    Ok(format!(
        "M = {}, N = {}, removed {{{}}}\nx~ = {}\nu~ = {}",
        p.m,
        p.n_total,
        removed.join(", "),
        show(&ext),
        show(&u)
    ))
}

#[wasm_bindgen(js_name = zProfile)]
pub fn z_profile(m: usize, channel: &str, mode: &str, mu: u32) -> Result<Vec<f64>, JsError> {
    z_values(m, channel, mode, mu).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = polarizationCurve)]
pub fn polarization_curve(
    lengths: Vec<u32>,
    channel: &str,
    mode: &str,
    mu: u32,
    beta: f64,
) -> Result<Vec<f64>, JsError> {
    let lengths: Vec<usize> = lengths.into_iter().map(|m| m as usize).collect();
    polarization(&lengths, channel, mode, mu, beta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = transformDisplay)]
pub fn transform_display(mode: &str, bits: &str) -> Result<String, JsError> {
    transform_text(mode, bits).map_err(|e| JsError::new(&e))
}
