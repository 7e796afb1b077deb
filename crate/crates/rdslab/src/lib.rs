//! `rdslab` is a desk-scale Monte Carlo laboratory for studying how logistic
//! regression behaves on respondent-driven samples (RDS).
//!
//! The pipeline mirrors a simulation study design:
//!
//! 1. [`netgen`] builds synthetic networked populations (Erdős–Rényi and
//!    Barabási–Albert variants, with or without nested subpopulations) and
//!    assigns two binary attributes, E1 and E2, at 50% prevalence each.
//! 2. [`epidemic`] spreads an infection over the population, either by random
//!    assignment or by susceptible–infected (SI) waves seeded from 10/100/500
//!    index cases, with E1-positive individuals at twice the odds of infection.
//! 3. [`sampling`] draws simple random benchmark samples and simulates RDS
//!    chain referral with three seeds and a 0.40/0.40/0.20 coupon
//!    distribution; it also ingests real RDS datasets and replays their
//!    recruitment trees.
//! 4. [`glm`] fits three logistic estimators to each sample: unweighted
//!    maximum likelihood, inverse-degree-weighted pseudo-likelihood, and a
//!    Bayesian pseudo-posterior with weakly informative Cauchy priors.
//! 5. [`eval`] classifies each fit against population truth (coverage of the
//!    E1 odds ratio, type-I error on E2 and the interaction) and aggregates
//!    replication outcomes per experiment cell.
//! 6. [`runner`] orchestrates the full grid deterministically and in parallel,
//!    and backs the `rdslab` command-line interface.
//!
//! All randomness flows through explicitly seeded ChaCha streams, so any run
//! is reproducible bit-for-bit from its configuration and master seed.

pub mod epidemic;
pub mod eval;
pub mod glm;
pub mod netgen;
pub mod runner;
pub mod sampling;
