#include <oge/market.hpp>

#include <algorithm>
#include <cmath>

namespace oge {

LiquidityPool::LiquidityPool (double reserve_numeraire, Tokens reserve_token, double fee_rate) :
reserve_numeraire_ (reserve_numeraire),
reserve_token_ (reserve_token),
fee_rate_ (fee_rate)
{
	if (!(reserve_numeraire > 0.0) || reserve_token.units <= 0)
	{
		throw Error (Errc::validation_error, "pool reserves must be positive");
	}
	if (!(fee_rate >= 0.0 && fee_rate < 1.0))
	{
		throw Error (Errc::validation_error, "fee_rate");
	}
}

double LiquidityPool::quote_numeraire_for_token (double amount_in) const
{
	auto y = reserve_token_.to_double ();
	return y - invariant () / (reserve_numeraire_ + amount_in * (1.0 - fee_rate_));
}

double LiquidityPool::quote_token_for_numeraire (double amount_in) const
{
	auto y = reserve_token_.to_double ();
	return reserve_numeraire_ - invariant () / (y + amount_in * (1.0 - fee_rate_));
}

LiquidityPool::BuyFill LiquidityPool::swap_numeraire_for_token (double amount_in)
{
	if (!(amount_in > 0.0) || !std::isfinite (amount_in))
	{
		throw Error (Errc::non_positive_amount);
	}
	auto k = invariant ();
	auto ideal = quote_numeraire_for_token (amount_in);
	auto out = Tokens::from_units (static_cast<std::int64_t> (std::floor (ideal * static_cast<double> (Tokens::scale))));
	out.units = std::min (out.units, reserve_token_.units - 1);
	if (out.units <= 0)
	{
		throw Error (Errc::non_positive_amount, "swap output rounds to zero");
	}
	auto new_token = reserve_token_ - out;
	// Numeraire actually required for the rounded output.
	double spent = (k / new_token.to_double () - reserve_numeraire_) / (1.0 - fee_rate_);
	spent = std::clamp (spent, 0.0, amount_in);
	reserve_numeraire_ += spent;
	reserve_token_ = new_token;
	return { out, spent };
}

double LiquidityPool::swap_token_for_numeraire (Tokens amount_in)
{
	if (amount_in.units <= 0)
	{
		throw Error (Errc::non_positive_amount);
	}
	auto k = invariant ();
	auto effective = amount_in.to_double () * (1.0 - fee_rate_);
	auto new_numeraire = k / (reserve_token_.to_double () + effective);
	auto out = reserve_numeraire_ - new_numeraire;
	reserve_numeraire_ = new_numeraire;
	reserve_token_ += amount_in;
	return out;
}

Listing const & ListingBook::list_asset (Asset const & asset, PseudoId const & seller, Tokens ask_price, Tick tick)
{
	if (asset.current_owner != seller)
	{
		throw Error (Errc::not_owner);
	}
	if (ask_price.units <= 0)
	{
		throw Error (Errc::non_positive_amount);
	}
	if (listings_.contains (asset.asset_id))
	{
		throw Error (Errc::already_listed);
	}
	Listing listing{ asset.asset_id, asset.class_id, ask_price, seller, tick };
	return listings_.emplace (asset.asset_id, listing).first->second;
}

void ListingBook::cancel (AssetId asset_id)
{
	listings_.erase (asset_id);
}

namespace {
bool better (Listing const & a, Listing const & b)
{
	if (a.ask_price != b.ask_price)
	{
		return a.ask_price < b.ask_price;
	}
	if (a.listed_tick != b.listed_tick)
	{
		return a.listed_tick < b.listed_tick;
	}
	return a.asset_id < b.asset_id;
}
}

std::optional<Listing> ListingBook::best_offer (ClassId class_id) const
{
	std::optional<Listing> best;
	for (auto const & [id, listing] : listings_)
	{
		if (listing.class_id == class_id && (!best || better (listing, *best)))
		{
			best = listing;
		}
	}
	return best;
}

std::vector<Listing> ListingBook::offers (ClassId class_id) const
{
	std::vector<Listing> out;
	for (auto const & [id, listing] : listings_)
	{
		if (listing.class_id == class_id)
		{
			out.push_back (listing);
		}
	}
	std::sort (out.begin (), out.end (), better);
	return out;
}

std::optional<Trade> buy_asset (ListingBook & book, AssetTable & assets, Balances & balances, TradeContext const & context,
PseudoId const & buyer, ClassId class_id, Tokens max_price, Tick tick)
{
	if (!context.registry.contains (buyer))
	{
		throw Error (Errc::unknown_identity);
	}
	std::optional<Listing> match;
	for (auto const & listing : book.offers (class_id))
	{
		if (listing.ask_price > max_price)
		{
			break;
		}
		if (listing.seller != buyer)
		{
			match = listing;
			break;
		}
	}
	if (!match)
	{
		return std::nullopt;
	}
	auto & balance = balances[buyer];
	if (balance < match->ask_price)
	{
		throw Error (Errc::insufficient_balance);
	}
	auto & asset = assets.at (match->asset_id);
	auto seller_status = context.registry.auth_status (match->seller, tick, context.grace_period);
	auto buyer_status = context.registry.auth_status (buyer, tick, context.grace_period);
	Trade trade;
	trade.asset_id = asset.asset_id;
	trade.seller = match->seller;
	trade.buyer = buyer;
	trade.price = match->ask_price;
	trade.utility_before = effective_utility (asset, seller_status, context.mechanisms, context.lapse_penalty);
	asset = transfer (context.registry, asset, buyer);
	trade.utility_after = effective_utility (asset, buyer_status, context.mechanisms, context.lapse_penalty);
	balance -= match->ask_price;
	balances[match->seller] += match->ask_price;
	book.cancel (asset.asset_id);
	return trade;
}
}
