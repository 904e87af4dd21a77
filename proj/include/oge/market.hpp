#pragma once

#include <oge/asset_engine.hpp>
#include <oge/identity_registry.hpp>
#include <oge/types.hpp>

#include <map>
#include <optional>
#include <vector>

namespace oge {

/**
 * Constant-product pool between the external numeraire and the game token.
 *
 * The token reserve is held in integer ledger units; the numeraire side is
 * continuous. Each swap quantizes the token leg and then settles the
 * numeraire leg against the invariant, so x*y stays at k (fee 0) to within
 * floating-point rounding and never drops below it with a fee.
 */
class LiquidityPool
{
public:
	LiquidityPool (double reserve_numeraire, Tokens reserve_token, double fee_rate = 0.003);

	double reserve_numeraire () const
	{
		return reserve_numeraire_;
	}
	Tokens reserve_token () const
	{
		return reserve_token_;
	}
	double fee_rate () const
	{
		return fee_rate_;
	}
	double invariant () const
	{
		return reserve_numeraire_ * reserve_token_.to_double ();
	}
	double spot_price () const
	{
		return reserve_numeraire_ / reserve_token_.to_double ();
	}

	struct BuyFill
	{
		Tokens tokens_out;
		double numeraire_spent;
	};

	/// Spends at most `amount_in` numeraire; unspent change from token rounding is returned in the fill.
	BuyFill swap_numeraire_for_token (double amount_in);
	double swap_token_for_numeraire (Tokens amount_in);

	/// Token output for `amount_in` numeraire before ledger rounding.
	double quote_numeraire_for_token (double amount_in) const;
	double quote_token_for_numeraire (double amount_in) const;

private:
	double reserve_numeraire_;
	Tokens reserve_token_;
	double fee_rate_;
};

struct Listing
{
	AssetId asset_id{ 0 };
	ClassId class_id{ 0 };
	Tokens ask_price;
	PseudoId seller;
	Tick listed_tick{ 0 };
};

struct Trade
{
	AssetId asset_id{ 0 };
	PseudoId seller;
	PseudoId buyer;
	Tokens price;
	double utility_before{ 0.0 };
	double utility_after{ 0.0 };
};

using Balances = std::map<PseudoId, Tokens>;

/// Ask-only book for assets; one live listing per asset.
class ListingBook
{
public:
	Listing const & list_asset (Asset const & asset, PseudoId const & seller, Tokens ask_price, Tick tick);
	void cancel (AssetId asset_id);
	bool is_listed (AssetId asset_id) const
	{
		return listings_.contains (asset_id);
	}
	/// Lowest ask, then earliest listing, then lowest id.
	std::optional<Listing> best_offer (ClassId class_id) const;
	std::vector<Listing> offers (ClassId class_id) const;
	std::map<AssetId, Listing> const & listings () const
	{
		return listings_;
	}

private:
	std::map<AssetId, Listing> listings_;
};

struct TradeContext
{
	IdentityRegistry const & registry;
	MechanismToggles const & mechanisms;
	Tick grace_period{ 7 };
	double lapse_penalty{ 0.5 };
};

/**
 * Fills the best offer for `class_id` at or under `max_price`. The transfer
 * and the token payment happen together; nothing changes on no-match.
 */
std::optional<Trade> buy_asset (ListingBook & book, AssetTable & assets, Balances & balances, TradeContext const & context,
PseudoId const & buyer, ClassId class_id, Tokens max_price, Tick tick);
}
