use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::instance::{Instance, QLimit, Vehicle};
use crate::network::io::{field, parse_err, records, write_network, NetworkRecords};
use crate::scalar::Scalar;

/// Reads the network records plus `params <eta> <q|inf> <tu> <horizon>` and
/// `vehicle <id> <o> <d> <ted> <tla>` records.
pub fn parse_instance<S: Scalar>(text: &str) -> Result<Instance<S>> {
    let mut net = NetworkRecords::new();
    let mut params = None;
    let mut vehicles = Vec::new();
    for (line, tokens) in records(text) {
        if net.accept(&tokens, line)? {
            continue;
        }
        match tokens[0] {
            "params" => {
                if tokens.len() != 5 {
                    return Err(parse_err(line, "expected `params <eta> <q> <tu> <horizon>`"));
                }
                let eta = S::parse_decimal(tokens[1]).ok_or_else(|| parse_err(line, "bad eta"))?;
                let q = match tokens[2] {
                    "inf" | "unlimited" => QLimit::Unlimited,
                    _ => QLimit::Limited(field(&tokens, 2, line, "platoon limit")?),
                };
                let tu: f64 = field(&tokens, 3, line, "time unit")?;
                let horizon: i64 = field(&tokens, 4, line, "horizon")?;
                if params.replace((eta, q, tu, horizon)).is_some() {
                    return Err(parse_err(line, "duplicate `params` record"));
                }
            }
            "vehicle" => {
                if tokens.len() != 6 {
                    return Err(parse_err(line, "expected `vehicle <id> <o> <d> <ted> <tla>`"));
                }
                vehicles.push(Vehicle {
                    id: field(&tokens, 1, line, "vehicle id")?,
                    origin: field(&tokens, 2, line, "origin")?,
                    dest: field(&tokens, 3, line, "destination")?,
                    earliest: field(&tokens, 4, line, "earliest departure")?,
                    latest: field(&tokens, 5, line, "latest arrival")?,
                });
            }
            other => return Err(parse_err(line, format!("unknown record '{other}'"))),
        }
    }
    let (eta, q, tu, horizon) = params.ok_or_else(|| parse_err(1, "missing `params` record"))?;
    vehicles.sort_by_key(|v| v.id);
    Instance::new(net.finish()?, vehicles, eta, q, tu, horizon)
}

pub fn write_instance<S: Scalar>(inst: &Instance<S>) -> String {
    let mut out = write_network(&inst.network);
    let _ = writeln!(out, "params {} {} {} {}", inst.eta.to_text(), inst.q, inst.time_unit, inst.horizon);
    for v in &inst.vehicles {
        let _ = writeln!(out, "vehicle {} {} {} {} {}", v.id, v.origin, v.dest, v.earliest, v.latest);
    }
    out
}

pub fn load_instance<S: Scalar>(path: impl AsRef<Path>) -> Result<Instance<S>> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn save_instance<S: Scalar>(inst: &Instance<S>, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, write_instance(inst))?)
}
