#include "sumcap/digest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sumcap/errors.hpp"

namespace sumcap {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_digest(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw InvalidInputError("file_digest: cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    char out[32];
    std::snprintf(out, sizeof(out), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(buf.str())));
    return out;
}

}  // namespace sumcap
