use wittenlab_core::hurwitz::{
    factorization_count_bruteforce, frobenius, HurwitzKey, HurwitzTable, TransformDirection, BRUTE_MAX_DEGREE,
    BRUTE_MAX_R,
};
use wittenlab_core::Rational;

use crate::error::AppResult;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Brute,
    Frobenius,
    /// Brute force inside its budget, characters otherwise.
    #[default]
    Auto,
}

pub fn hurwitz_value(key: &HurwitzKey, method: Method) -> AppResult<Rational> {
    let method = match method {
        Method::Auto if key.degree() <= BRUTE_MAX_DEGREE && key.r <= BRUTE_MAX_R => Method::Brute,
        Method::Auto => Method::Frobenius,
        m => m,
    };
    Ok(match method {
        Method::Brute => factorization_count_bruteforce(key)?,
        _ if !key.connected => frobenius(key)?,
        _ => {
            let disc = HurwitzTable::build_frobenius(key.degree(), key.r)?;
            let conn = disc.transform(TransformDirection::Log)?;
            conn.get(&key.nu, &key.mu, key.r).cloned().unwrap_or_default()
        }
    })
}
