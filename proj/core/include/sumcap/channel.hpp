#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sumcap/hermitian.hpp"

namespace sumcap {

// A broadcast-channel instance: K per-user channel matrices H_i, each
// n_r x n_t, plus the sum power budget P shared by all users.
struct ChannelSet {
    int K = 0;
    int nt = 0;
    int nr = 0;
    double P = 0.0;
    std::vector<CMatrix> H;
};

// Throws InvalidInputError unless every invariant holds: K, nt, nr >= 1,
// P >= 0 and finite, K matrices all of shape nr x nt with finite entries.
void validate(const ChannelSet& c);

// Rayleigh-fading instance: every entry i.i.d. circularly-symmetric complex
// Gaussian, zero mean, unit variance. Generation is pinned to mt19937_64 plus
// an explicit Box-Muller map (one engine pair per complex entry, matrices
// filled row-major, user 0 first), so a seed reproduces the instance
// bit-for-bit.
ChannelSet generate_rayleigh(int K, int nt, int nr, double P, std::uint64_t seed);

// Channel file: JSON document with fields version (= 1), K, nt, nr, P, and
// H = K matrices as nested arrays of [re, im] pairs. Numbers round-trip
// losslessly; load(save(c)) == c entrywise. Parse errors name the path of the
// offending element.
void save_channels(const ChannelSet& c, std::ostream& out);
void save_channels(const ChannelSet& c, const std::filesystem::path& file);
ChannelSet load_channels(std::istream& in);
ChannelSet load_channels(const std::filesystem::path& file);

}  // namespace sumcap
