#include <oge/hash.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace oge {

std::string Digest::hex () const
{
	static constexpr char digits[] = "0123456789abcdef";
	std::string out;
	out.reserve (bytes.size () * 2);
	for (auto b : bytes)
	{
		out.push_back (digits[b >> 4]);
		out.push_back (digits[b & 0xf]);
	}
	return out;
}

bool Digest::is_zero () const
{
	return std::all_of (bytes.begin (), bytes.end (), [] (auto b) { return b == 0; });
}

Digest sha256 (std::span<std::uint8_t const> data)
{
	Hasher h;
	return h.add (data).finish ();
}

Hasher::Hasher () :
ctx_ (EVP_MD_CTX_new ())
{
	if (ctx_ == nullptr || EVP_DigestInit_ex (static_cast<EVP_MD_CTX *> (ctx_), EVP_sha256 (), nullptr) != 1)
	{
		throw std::runtime_error ("sha256 init failed");
	}
}

Hasher::~Hasher ()
{
	EVP_MD_CTX_free (static_cast<EVP_MD_CTX *> (ctx_));
}

Hasher & Hasher::add (std::span<std::uint8_t const> data)
{
	auto * ctx = static_cast<EVP_MD_CTX *> (ctx_);
	std::uint64_t len = data.size ();
	std::array<std::uint8_t, 8> prefix{};
	for (int i = 0; i < 8; ++i)
	{
		prefix[i] = static_cast<std::uint8_t> (len >> (8 * (7 - i)));
	}
	EVP_DigestUpdate (ctx, prefix.data (), prefix.size ());
	EVP_DigestUpdate (ctx, data.data (), data.size ());
	return *this;
}

Hasher & Hasher::add (Digest const & digest)
{
	return add (std::span<std::uint8_t const> (digest.bytes));
}

Hasher & Hasher::add (std::string_view text)
{
	return add (std::span<std::uint8_t const> (reinterpret_cast<std::uint8_t const *> (text.data ()), text.size ()));
}

Hasher & Hasher::add (std::uint64_t value)
{
	std::array<std::uint8_t, 8> be{};
	for (int i = 0; i < 8; ++i)
	{
		be[i] = static_cast<std::uint8_t> (value >> (8 * (7 - i)));
	}
	return add (std::span<std::uint8_t const> (be));
}

Digest Hasher::finish ()
{
	Digest out;
	unsigned int len = 0;
	EVP_DigestFinal_ex (static_cast<EVP_MD_CTX *> (ctx_), out.bytes.data (), &len);
	return out;
}
}
