#pragma once

#include <oge/hash.hpp>
#include <oge/types.hpp>

#include <map>
#include <set>
#include <vector>

namespace oge {

/// Ground truth for "one biological human". Only ever leaves the registry as a commitment.
struct BiometricSeed
{
	Digest value{};
	auto operator<=> (BiometricSeed const &) const = default;
};

/// Deterministic seed for entity `index` of agent `agent` under run seed `run_seed`.
BiometricSeed make_seed (std::uint64_t run_seed, std::string_view domain, AgentId agent, std::uint64_t index);

Digest commitment_of (BiometricSeed const & seed);
PseudoId derive_pseudo_id (BiometricSeed const & seed);

enum class AuthStatus
{
	fresh,
	in_grace,
	lapsed
};

std::string_view to_string (AuthStatus status);

/// Fresh at the auth tick, InGrace up to and including `grace` ticks later, Lapsed after.
AuthStatus classify_auth (Tick last_auth_tick, Tick tick, Tick grace_period);

/// Per-tick challenge H(tick || pseudo_id).
Digest zk_poi_challenge (PseudoId const & id, Tick tick);
/// Prover side of the mock zk-PoI: H(seed || challenge).
Digest make_zk_poi_proof (BiometricSeed const & seed, PseudoId const & id, Tick tick);

class GroundTruthView;
class IdentityRegistry;

class IdentityRecord
{
public:
	PseudoId pseudo_id;
	Digest commitment;
	Tick registered_tick{ 0 };
	Tick last_auth_tick{ 0 };

private:
	BiometricSeed seed_;
	bool ground_truth_human_{ false };

	friend class IdentityRegistry;
	friend class GroundTruthView;
};

class IdentityRegistry
{
public:
	/// Rejects a seed whose commitment is already registered (the Sybil path).
	PseudoId register_identity (BiometricSeed const & seed, Tick tick);
	bool verify_zk_poi (PseudoId const & id, Digest const & proof_token, Tick tick) const;
	IdentityRecord const & record_liveness (PseudoId const & id, Tick tick);
	AuthStatus auth_status (PseudoId const & id, Tick tick, Tick grace_period) const;

	bool contains (PseudoId const & id) const;
	IdentityRecord const & at (PseudoId const & id) const;
	std::size_t size () const
	{
		return records_.size ();
	}
	std::map<PseudoId, IdentityRecord> const & records () const
	{
		return records_;
	}

private:
	std::map<PseudoId, IdentityRecord> records_;
	std::set<Digest> commitments_;

	friend class GroundTruthView;
};

/**
 * Read/write access to the simulator-omniscient human flag. Only the
 * simulation driver (writes at registration) and metrics (reads) use it;
 * mechanism and policy code never includes a path to this class.
 */
class GroundTruthView
{
public:
	static bool is_human (IdentityRegistry const & registry, PseudoId const & id);
	static void set_human (IdentityRegistry & registry, PseudoId const & id, bool human);
};

/// Mock of the external trusted identity infrastructure: knows which seeds belong to real people.
class SeedAttestor
{
public:
	void add (BiometricSeed const & seed)
	{
		genuine_.insert (commitment_of (seed));
	}
	bool attests (BiometricSeed const & seed) const
	{
		return genuine_.contains (commitment_of (seed));
	}

private:
	std::set<Digest> genuine_;
};

/// Verified-human fraction of `active_accounts`. Unregistered ids count in the denominator only.
double identity_labor_coefficient (IdentityRegistry const & registry, std::set<PseudoId> const & active_accounts);
}
