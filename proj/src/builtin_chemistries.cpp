// Packaged chemistry configs. The grammar is described in docs/chemistry-format.md.

#include <map>
#include <mutex>
#include <string>

#include "chemlab/chemistry.hpp"
#include "chemlab/error.hpp"

namespace chemlab {

namespace {

constexpr std::string_view kChemlambdaTypes = R"(
[types]
L 0 1 1
A 0 0 1
FI 0 0 1
D 0 0 1
FOE 0 1 1
FOX 0 1 1
FO 0 1 1
T 0 terminator
Arrow 0 1 arrow
GAMMA 0 0 0 unoriented
DELTA 0 0 0 unoriented
FRIN 1 cap
FROUT 0 cap
)";

// Placeholders: the LHS "X 1 2 3 / Y 3 4 5" for contact = 1 3; letters are
// RHS-internal edges.
constexpr std::string_view kChemlambdaRewrites = R"(
[rewrites]
name = L-A
left = L
right = A
contact = 1 3
action = beta
kind = BETA
rhs = Arrow 1 5 ^ Arrow 4 2
token1 = Arrow y x ^ Arrow x y
token2 = L y 3 y ^ A x 3 x

name = FI-FOE
left = FI
right = FOE
contact = 1 3
action = fan-in
kind = FAN-IN
rhs = Arrow 1 5 ^ Arrow 2 4

name = L-FO
left = L
right = FO
contact = 1 3
action = DIST0
kind = DIST
blocks = FOE-L
rhs = FI j i 2 ^ L k i 4 ^ L l j 5 ^ FOE 1 k l

name = L-FOE
left = L
right = FOE
contact = 1 3
action = DIST0
kind = DIST
blocks = FOE-L
rhs = FI j i 2 ^ L k i 4 ^ L l j 5 ^ FOE 1 k l

name = A-FO
left = A
right = FO
contact = 1 3
action = DIST1
kind = DIST
blocks = FOE-A
rhs = FOE 1 i j ^ FOE 2 k l ^ A i k 4 ^ A j l 5

name = A-FOE
left = A
right = FOE
contact = 1 3
action = DIST1
kind = DIST
blocks = FOE-A
rhs = FOE 1 i j ^ FOE 2 k l ^ A i k 4 ^ A j l 5

name = FI-FO
left = FI
right = FO
contact = 1 3
action = DIST2
kind = DIST
blocks = FO-FI
rhs = FO 1 i j ^ FO 2 k l ^ FI i k 4 ^ FI j l 5

name = FO-FOE
left = FO
right = FOE
contact = 1 3
action = DIST3
kind = DIST
blocks = FOE-FO
rhs = FI j i 2 ^ FO k i 4 ^ FO l j 5 ^ FOE 1 k l

name = L-T
left = L
right = T
contact = 1 3
action = terminate-out
kind = TERM
rhs = T 1 ^ FRIN 2

name = A-T
left = A
right = T
contact = 1 3
action = terminate-out
kind = TERM
rhs = T 1 ^ T 2

name = FI-T
left = FI
right = T
contact = 1 3
action = terminate-out
kind = TERM
rhs = T 1 ^ T 2

name = FO-T
left = FO
right = T
contact = 1 3
action = terminate-branch
kind = TERM
rhs = Arrow 1 2

name = FOE-T
left = FOE
right = T
contact = 1 3
action = terminate-branch
kind = TERM
rhs = Arrow 1 2

name = FO-T.2
left = FO
right = T
contact = 1 2
action = terminate-branch
kind = TERM
rhs = Arrow 1 3

name = FOE-T.2
left = FOE
right = T
contact = 1 2
action = terminate-branch
kind = TERM
rhs = Arrow 1 3
)";

// Principal port is port 1 on both combinators.
constexpr std::string_view kIcRewrites = R"(
name = GAMMA-GAMMA
left = GAMMA
right = GAMMA
contact = 1 1
action = annihilate-twist
kind = IC-ANNIHILATE
rhs = Arrow 2 5 ^ Arrow 3 4

name = DELTA-DELTA
left = DELTA
right = DELTA
contact = 1 1
action = annihilate-straight
kind = IC-ANNIHILATE
rhs = Arrow 2 4 ^ Arrow 3 5

name = GAMMA-DELTA
left = GAMMA
right = DELTA
contact = 1 1
action = commute
kind = IC-COMMUTE
rhs = DELTA 2 i j ^ DELTA 3 k l ^ GAMMA 4 i k ^ GAMMA 5 j l
)";

std::string chemlambda_source()
{
    return "# chemlambda v2\nname = chemlambda-v2\n" + std::string(kChemlambdaTypes) + std::string(kChemlambdaRewrites);
}

std::string ic_source()
{
    return "# interaction combinators\nname = ic\n"
           "\n[types]\nGAMMA 0 0 0 unoriented\nDELTA 0 0 0 unoriented\nArrow 0 1 arrow\n"
           "FRIN 1 cap\nFROUT 0 cap\nFREE 0 cap unoriented\n"
           "\n[rewrites]\n" +
           std::string(kIcRewrites);
}

std::string mixed_source()
{
    return "# chemlambda v2 together with interaction combinators\nname = chemlambda+ic\n" +
           std::string(kChemlambdaTypes) + "FREE 0 cap unoriented\n" + std::string(kChemlambdaRewrites) +
           std::string(kIcRewrites);
}

const std::map<std::string, std::string, std::less<>>& sources()
{
    static const std::map<std::string, std::string, std::less<>> s{
        {"chemlambda-v2", chemlambda_source()},
        {"ic", ic_source()},
        {"chemlambda+ic", mixed_source()},
    };
    return s;
}

} // namespace

std::vector<std::string> builtin_names()
{
    return {"chemlambda-v2", "ic", "chemlambda+ic"};
}

std::string_view builtin_source(std::string_view name)
{
    auto it = sources().find(name);
    if (it == sources().end())
        throw Error(ErrorCode::UnknownChemistry, "unknown chemistry '" + std::string(name) + "'");
    return it->second;
}

const Chemistry& builtin(std::string_view name)
{
    static std::mutex mutex;
    static std::map<std::string, Chemistry, std::less<>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(name); it != cache.end())
        return it->second;
    auto text = builtin_source(name);
    return cache.emplace(std::string(name), load_chemistry(text)).first->second;
}

} // namespace chemlab
