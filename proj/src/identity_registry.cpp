#include <oge/identity_registry.hpp>

namespace oge {

namespace {
constexpr std::string_view commit_tag = "oge/commitment/v1";
constexpr std::string_view pseudo_tag = "oge/pseudo-id/v1";
constexpr std::string_view challenge_tag = "oge/zk-poi/challenge/v1";
constexpr std::string_view proof_tag = "oge/zk-poi/proof/v1";
}

BiometricSeed make_seed (std::uint64_t run_seed, std::string_view domain, AgentId agent, std::uint64_t index)
{
	Hasher h;
	h.add ("oge/seed/v1").add (run_seed).add (domain).add (static_cast<std::uint64_t> (agent)).add (index);
	return BiometricSeed{ h.finish () };
}

Digest commitment_of (BiometricSeed const & seed)
{
	Hasher h;
	return h.add (commit_tag).add (seed.value).finish ();
}

PseudoId derive_pseudo_id (BiometricSeed const & seed)
{
	Hasher h;
	return PseudoId{ h.add (commitment_of (seed)).add (pseudo_tag).finish () };
}

std::string_view to_string (AuthStatus status)
{
	switch (status)
	{
		case AuthStatus::fresh:
			return "Fresh";
		case AuthStatus::in_grace:
			return "InGrace";
		case AuthStatus::lapsed:
			return "Lapsed";
	}
	return "Unknown";
}

AuthStatus classify_auth (Tick last_auth_tick, Tick tick, Tick grace_period)
{
	auto elapsed = tick - last_auth_tick;
	if (elapsed == 0)
	{
		return AuthStatus::fresh;
	}
	if (elapsed > 0 && elapsed <= grace_period)
	{
		return AuthStatus::in_grace;
	}
	return AuthStatus::lapsed;
}

Digest zk_poi_challenge (PseudoId const & id, Tick tick)
{
	Hasher h;
	return h.add (challenge_tag).add (static_cast<std::uint64_t> (tick)).add (id.value).finish ();
}

Digest make_zk_poi_proof (BiometricSeed const & seed, PseudoId const & id, Tick tick)
{
	Hasher h;
	return h.add (proof_tag).add (seed.value).add (zk_poi_challenge (id, tick)).finish ();
}

PseudoId IdentityRegistry::register_identity (BiometricSeed const & seed, Tick tick)
{
	auto commitment = commitment_of (seed);
	if (commitments_.contains (commitment))
	{
		throw Error (Errc::duplicate_identity);
	}
	IdentityRecord record;
	record.pseudo_id = derive_pseudo_id (seed);
	record.commitment = commitment;
	record.registered_tick = tick;
	record.last_auth_tick = tick;
	record.seed_ = seed;
	commitments_.insert (commitment);
	auto id = record.pseudo_id;
	records_.emplace (id, record);
	return id;
}

bool IdentityRegistry::verify_zk_poi (PseudoId const & id, Digest const & proof_token, Tick tick) const
{
	auto const & record = at (id);
	return make_zk_poi_proof (record.seed_, id, tick) == proof_token;
}

IdentityRecord const & IdentityRegistry::record_liveness (PseudoId const & id, Tick tick)
{
	auto it = records_.find (id);
	if (it == records_.end ())
	{
		throw Error (Errc::unknown_identity);
	}
	if (tick < it->second.last_auth_tick)
	{
		throw Error (Errc::time_regression);
	}
	it->second.last_auth_tick = tick;
	return it->second;
}

AuthStatus IdentityRegistry::auth_status (PseudoId const & id, Tick tick, Tick grace_period) const
{
	return classify_auth (at (id).last_auth_tick, tick, grace_period);
}

bool IdentityRegistry::contains (PseudoId const & id) const
{
	return records_.contains (id);
}

IdentityRecord const & IdentityRegistry::at (PseudoId const & id) const
{
	auto it = records_.find (id);
	if (it == records_.end ())
	{
		throw Error (Errc::unknown_identity);
	}
	return it->second;
}

bool GroundTruthView::is_human (IdentityRegistry const & registry, PseudoId const & id)
{
	auto it = registry.records_.find (id);
	return it != registry.records_.end () && it->second.ground_truth_human_;
}

void GroundTruthView::set_human (IdentityRegistry & registry, PseudoId const & id, bool human)
{
	auto it = registry.records_.find (id);
	if (it == registry.records_.end ())
	{
		throw Error (Errc::unknown_identity);
	}
	it->second.ground_truth_human_ = human;
}

double identity_labor_coefficient (IdentityRegistry const & registry, std::set<PseudoId> const & active_accounts)
{
	if (active_accounts.empty ())
	{
		throw Error (Errc::empty_active_set);
	}
	std::size_t humans = 0;
	for (auto const & id : active_accounts)
	{
		if (GroundTruthView::is_human (registry, id))
		{
			++humans;
		}
	}
	return static_cast<double> (humans) / static_cast<double> (active_accounts.size ());
}
}
