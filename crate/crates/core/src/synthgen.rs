//! Synthetic labeled ego networks with planted focus structure.
//!
//! Neighbors are split into dense clusters (foci) with sparse noise between
//! them; the planted partner is linked into several distinct foci, so their
//! mutual friends with the center span clusters that barely touch. That is
//! exactly the shape the dispersion measures reward, which makes these
//! corpora useful for directional evaluation even though they make no claim
//! about any real social network's generative process.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::EgoNetwork;
use crate::ranking::Instance;
use crate::seed::derive_seed;

/// How many times the partner attachment is redrawn before giving up.
pub const PARTNER_ATTACH_ATTEMPTS: u32 = 64;

/// Center, partner, and member id prefixes used by generated instances.
pub const CENTER_ID: &str = "c";
pub const PARTNER_ID: &str = "p";

/// Generator parameters; see [`GenParams::validate`] for the allowed
/// ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    /// Number of foci the neighbors split into.
    pub n_foci: u32,
    /// Inclusive bounds on each focus's size.
    pub focus_min: u32,
    pub focus_max: u32,
    /// Link probability within a focus.
    pub p_in: f64,
    /// Link probability across foci.
    pub p_out: f64,
    /// Number of distinct foci the partner is introduced into.
    pub partner_foci: u32,
    /// Per-member link probability within each chosen focus.
    pub partner_attach: f64,
    /// Master seed; corpus generation derives one seed per index from it.
    pub seed: u64,
}

impl GenParams {
    /// The documented default preset: four foci of 15 to 40 members, dense
    /// inside (0.3) and sparse across (0.005), with the partner spread
    /// thinly (0.14) over all four foci.
    ///
    /// The attachment rate is deliberately low: it leaves the partner's
    /// embeddedness near an ordinary focus member's, so mutual-friend
    /// counting misses often while dispersion-based scores stay sharp.
    pub fn preset(name: &str) -> Result<GenParams> {
        match name {
            "paper-like" => Ok(GenParams {
                n_foci: 4,
                focus_min: 15,
                focus_max: 40,
                p_in: 0.3,
                p_out: 0.005,
                partner_foci: 4,
                partner_attach: 0.14,
                seed: 0,
            }),
            other => Err(Error::UnknownPreset(other.to_owned())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::BadGenParams(reason.to_owned()));
        if self.n_foci < 2 {
            return bad("n_foci must be at least 2");
        }
        if self.focus_min < 1 || self.focus_min > self.focus_max {
            return bad("focus sizes must satisfy 1 <= min <= max");
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
            return bad("p_in and p_out must be probabilities");
        }
        if self.p_out >= self.p_in {
            return bad("p_out must be strictly below p_in");
        }
        if self.partner_foci < 2 || self.partner_foci > self.n_foci {
            return bad("partner_foci must be in 2..=n_foci");
        }
        if !(0.0..=1.0).contains(&self.partner_attach) {
            return bad("partner_attach must be a probability");
        }
        Ok(())
    }

    fn tags(&self, seed: u64) -> BTreeMap<String, String> {
        let mut tags = BTreeMap::new();
        tags.insert("n_foci".into(), self.n_foci.to_string());
        tags.insert("focus_min".into(), self.focus_min.to_string());
        tags.insert("focus_max".into(), self.focus_max.to_string());
        tags.insert("p_in".into(), self.p_in.to_string());
        tags.insert("p_out".into(), self.p_out.to_string());
        tags.insert("partner_foci".into(), self.partner_foci.to_string());
        tags.insert("partner_attach".into(), self.partner_attach.to_string());
        tags.insert("seed".into(), seed.to_string());
        tags
    }
}

/// One labeled instance from one seed. The draw order is part of the format
/// contract: focus sizes first, then one coin per member pair in global
/// index order, then partner attachment coins per attempt (chosen foci in
/// ascending order, members in id order). Every chosen focus must receive
/// at least one partner link or the attachment is redrawn, up to
/// [`PARTNER_ATTACH_ATTEMPTS`] times.
pub fn generate_instance(params: &GenParams) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let sizes: Vec<u32> = (0..params.n_foci)
        .map(|_| rng.gen_range(params.focus_min..=params.focus_max))
        .collect();
    let member_count: usize = sizes.iter().map(|&s| s as usize).sum();
    let ids: Vec<String> = (0..member_count).map(|i| format!("f{i:04}")).collect();
    let mut focus_of = Vec::with_capacity(member_count);
    for (focus, &size) in sizes.iter().enumerate() {
        focus_of.extend(std::iter::repeat_n(focus, size as usize));
    }

    let mut edges: Vec<(String, String)> = Vec::new();
    edges.push((CENTER_ID.to_owned(), PARTNER_ID.to_owned()));
    for id in &ids {
        edges.push((CENTER_ID.to_owned(), id.clone()));
    }
    for i in 0..member_count {
        for j in (i + 1)..member_count {
            let p = if focus_of[i] == focus_of[j] {
                params.p_in
            } else {
                params.p_out
            };
            if rng.gen::<f64>() < p {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }

    let focus_start: Vec<usize> = sizes
        .iter()
        .scan(0usize, |acc, &s| {
            let start = *acc;
            *acc += s as usize;
            Some(start)
        })
        .collect();
    let mut attached = false;
    for _ in 0..PARTNER_ATTACH_ATTEMPTS {
        let mut pool: Vec<usize> = (0..params.n_foci as usize).collect();
        for k in 0..params.partner_foci as usize {
            let r = rng.gen_range(k..pool.len());
            pool.swap(k, r);
        }
        let mut chosen = pool[..params.partner_foci as usize].to_vec();
        chosen.sort_unstable();

        let mut links = Vec::new();
        let mut covered = true;
        for &focus in &chosen {
            let start = focus_start[focus];
            let end = start + sizes[focus] as usize;
            let before = links.len();
            for member in start..end {
                if rng.gen::<f64>() < params.partner_attach {
                    links.push(member);
                }
            }
            covered &= links.len() > before;
        }
        if covered {
            for member in links {
                edges.push((PARTNER_ID.to_owned(), ids[member].clone()));
            }
            attached = true;
            break;
        }
    }
    if !attached {
        return Err(Error::PartnerAttachmentFailed(PARTNER_ATTACH_ATTEMPTS));
    }

    let network = EgoNetwork::build(CENTER_ID, &edges)?;
    Instance::new(network, PARTNER_ID, &[], params.tags(params.seed))
}

/// `count` instances from per-index seeds derived off the master seed, in
/// index order. Generation runs in parallel; the result does not depend on
/// the worker count.
pub fn generate_corpus(params: &GenParams, count: usize) -> Result<Vec<Instance>> {
    params.validate()?;
    if count == 0 {
        return Err(Error::BadGenParams("count must be at least 1".to_owned()));
    }
    let instances: Vec<Result<Instance>> = (0..count)
        .into_par_iter()
        .map(|index| {
            let mut per_instance = params.clone();
            per_instance.seed = derive_seed(params.seed, index as u64);
            let mut instance = generate_instance(&per_instance)?;
            // Tags already carry the derived seed; add the corpus position.
            instance.tags_mut().insert("index".into(), index.to_string());
            Ok(instance)
        })
        .collect();
    instances.into_iter().collect()
}
