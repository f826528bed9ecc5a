//! Flat `key = value` study configuration. Lists are comma separated, `#`
//! starts a comment.
//!
//! ```text
//! n_grid = 16, 32, 64, 128
//! orders_r = 1, 2, 3, 4
//! orders_s = 1, 2, 3, 4
//! designs = uniform, nonuniform
//! delta = 0.1
//! wce_floor = 1e-11
//! ```

use std::str::FromStr;

use crate::design::DesignKind;
use crate::error::{QuadError, Result};
use crate::kernel::Order;
use crate::study::StudyConfig;

fn parse_list<T>(value: &str, parse: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(parse)
        .collect()
}

fn parse_num<T: FromStr>(item: &str) -> std::result::Result<T, String> {
    item.parse::<T>().map_err(|_| format!("cannot parse '{item}' as a number"))
}

fn parse_order(item: &str) -> std::result::Result<Order, String> {
    let r: i64 = parse_num(item)?;
    Order::new(r).map_err(|e| e.to_string())
}

/// Applies one `key = value` assignment. `line` is only used for messages.
pub fn apply_setting(cfg: &mut StudyConfig, key: &str, value: &str, line: usize) -> Result<()> {
    let fail = |message: String| QuadError::Config { line, message };
    let value = value.trim();
    match key.trim() {
        "n_grid" => cfg.n_grid = parse_list(value, parse_num::<usize>).map_err(fail)?,
        "orders_r" => cfg.orders_r = parse_list(value, parse_order).map_err(fail)?,
        "orders_s" => cfg.orders_s = parse_list(value, parse_order).map_err(fail)?,
        "designs" => {
            cfg.designs = parse_list(value, |item| item.parse::<DesignKind>().map_err(|e| e.to_string()))
                .map_err(fail)?
        }
        "delta" | "scale" => cfg.scale = parse_num(value).map_err(fail)?,
        "wce_floor" => cfg.wce_floor = parse_num(value).map_err(fail)?,
        other => return Err(fail(format!("unknown key '{other}'"))),
    }
    Ok(())
}

/// Parses a config file body on top of the defaults. Does not validate the
/// resulting configuration.
pub fn parse_config(text: &str) -> Result<StudyConfig> {
    let mut cfg = StudyConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| QuadError::Config {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        apply_setting(&mut cfg, key, value, line)?;
    }
    Ok(cfg)
}

/// Applies `key=value` overrides; errors report the override's position
/// (1-based) as the line.
pub fn apply_overrides(cfg: &mut StudyConfig, overrides: &[String]) -> Result<()> {
    for (idx, item) in overrides.iter().enumerate() {
        let (key, value) = item.split_once('=').ok_or_else(|| QuadError::Config {
            line: idx + 1,
            message: format!("override '{item}' is not of the form key=value"),
        })?;
        apply_setting(cfg, key, value, idx + 1)?;
    }
    Ok(())
}
