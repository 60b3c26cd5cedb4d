#include "sumcap/channel.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

namespace sumcap {

namespace {

constexpr int kChannelFileVersion = 1;

// Engine output -> (0, 1]; the +1 keeps log() away from zero.
double unitOpenClosed(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

std::string idx(const std::string& base, int i) {
    return base + "[" + std::to_string(i) + "]";
}

}  // namespace

void validate(const ChannelSet& c) {
    if (c.K < 1 || c.nt < 1 || c.nr < 1)
        throw InvalidInputError("ChannelSet: K, nt, nr must all be >= 1");
    if (!std::isfinite(c.P) || c.P < 0.0)
        throw InvalidInputError("ChannelSet: P must be finite and >= 0");
    if (static_cast<int>(c.H.size()) != c.K)
        throw InvalidInputError("ChannelSet: expected K channel matrices");
    for (int i = 0; i < c.K; ++i) {
        const CMatrix& h = c.H[static_cast<std::size_t>(i)];
        if (h.rows() != c.nr || h.cols() != c.nt)
            throw InvalidInputError("ChannelSet: " + idx("H", i) + " must be nr x nt");
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index col = 0; col < h.cols(); ++col)
                if (!std::isfinite(h(r, col).real()) || !std::isfinite(h(r, col).imag()))
                    throw InvalidInputError("ChannelSet: " + idx("H", i) +
                                            " has a non-finite entry");
    }
}

ChannelSet generate_rayleigh(int K, int nt, int nr, double P, std::uint64_t seed) {
    if (K < 1 || nt < 1 || nr < 1)
        throw InvalidInputError("generate_rayleigh: K, nt, nr must all be >= 1");
    if (!std::isfinite(P) || P < 0.0)
        throw InvalidInputError("generate_rayleigh: P must be finite and >= 0");

    std::mt19937_64 eng(seed);
    ChannelSet c;
    c.K = K;
    c.nt = nt;
    c.nr = nr;
    c.P = P;
    c.H.reserve(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        CMatrix h(nr, nt);
        for (int r = 0; r < nr; ++r) {
            for (int col = 0; col < nt; ++col) {
                // Box-Muller in polar form: h = sqrt(-ln u1) e^{i 2π u2},
                // which has E|h|^2 = 1 and independent N(0, 1/2) parts.
                const double u1 = unitOpenClosed(eng());
                const double u2 = unitOpenClosed(eng());
                const double mag = std::sqrt(-std::log(u1));
                h(r, col) = Cplx(mag * std::cos(2.0 * M_PI * u2),
                                 mag * std::sin(2.0 * M_PI * u2));
            }
        }
        c.H.push_back(std::move(h));
    }
    return c;
}

void save_channels(const ChannelSet& c, std::ostream& out) {
    validate(c);
    nlohmann::json doc;
    doc["version"] = kChannelFileVersion;
    doc["K"] = c.K;
    doc["nt"] = c.nt;
    doc["nr"] = c.nr;
    doc["P"] = c.P;
    nlohmann::json users = nlohmann::json::array();
    for (const CMatrix& h : c.H) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index col = 0; col < h.cols(); ++col)
                row.push_back({h(r, col).real(), h(r, col).imag()});
            rows.push_back(std::move(row));
        }
        users.push_back(std::move(rows));
    }
    doc["H"] = std::move(users);
    out << doc.dump(1, '\t') << '\n';
}

void save_channels(const ChannelSet& c, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out)
        throw InvalidInputError("save_channels: cannot open " + file.string() +
                                " for writing");
    save_channels(c, out);
    out.flush();
    if (!out)
        throw InvalidInputError("save_channels: write to " + file.string() + " failed");
}

namespace {

int requireInt(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key))
        throw ParseError(key, "missing field");
    const auto& v = doc.at(key);
    if (!v.is_number_integer())
        throw ParseError(key, "expected an integer");
    return v.get<int>();
}

double requireFiniteNumber(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number())
        throw ParseError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ParseError(path, "value must be finite");
    return x;
}

}  // namespace

ChannelSet load_channels(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        // Covers malformed documents and token-level number overflow; the
        // library message quotes the offending token.
        throw ParseError("(document)", e.what());
    }
    if (!doc.is_object())
        throw ParseError("(document)", "expected a JSON object");

    const int version = requireInt(doc, "version");
    if (version != kChannelFileVersion)
        throw ParseError("version", "unsupported version " + std::to_string(version));

    ChannelSet c;
    c.K = requireInt(doc, "K");
    c.nt = requireInt(doc, "nt");
    c.nr = requireInt(doc, "nr");
    if (c.K < 1) throw ParseError("K", "must be >= 1");
    if (c.nt < 1) throw ParseError("nt", "must be >= 1");
    if (c.nr < 1) throw ParseError("nr", "must be >= 1");

    if (!doc.contains("P"))
        throw ParseError("P", "missing field");
    c.P = requireFiniteNumber(doc.at("P"), "P");
    if (c.P < 0.0)
        throw ParseError("P", "must be >= 0");

    if (!doc.contains("H") || !doc.at("H").is_array())
        throw ParseError("H", "expected an array of K matrices");
    const auto& users = doc.at("H");
    if (static_cast<int>(users.size()) != c.K)
        throw ParseError("H", "expected " + std::to_string(c.K) + " matrices, found " +
                                  std::to_string(users.size()));

    c.H.reserve(static_cast<std::size_t>(c.K));
    for (int i = 0; i < c.K; ++i) {
        const std::string mpath = idx("H", i);
        const auto& rows = users.at(static_cast<std::size_t>(i));
        if (!rows.is_array() || static_cast<int>(rows.size()) != c.nr)
            throw ParseError(mpath, "expected " + std::to_string(c.nr) + " rows");
        CMatrix h(c.nr, c.nt);
        for (int r = 0; r < c.nr; ++r) {
            const std::string rpath = idx(mpath, r);
            const auto& row = rows.at(static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<int>(row.size()) != c.nt)
                throw ParseError(rpath, "expected " + std::to_string(c.nt) + " entries");
            for (int col = 0; col < c.nt; ++col) {
                const std::string epath = idx(rpath, col);
                const auto& entry = row.at(static_cast<std::size_t>(col));
                if (!entry.is_array() || entry.size() != 2)
                    throw ParseError(epath, "expected a [re, im] pair");
                h(r, col) = Cplx(requireFiniteNumber(entry.at(0), epath + "[0]"),
                                 requireFiniteNumber(entry.at(1), epath + "[1]"));
            }
        }
        c.H.push_back(std::move(h));
    }
    return c;
}

ChannelSet load_channels(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw InvalidInputError("load_channels: cannot open " + file.string());
    return load_channels(in);
}

}  // namespace sumcap
