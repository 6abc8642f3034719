// Line-oriented text formats.
//
// Network:   N <id> <T> <m> <b> <Z|N> <reg|prog|out>
//            S <pre> <post> <delay> <weight>
//            P <id> <t1,t2,...>          programmed schedule (if any)
//            IN <id> <id> ...            ordered input ports
//            OUT <id> <id> ...           ordered output ports
// Circuit:   network lines plus
//            PORTMAP <role> <id>
//            META latency=<L> ii=<II> scale=<S> feedforward=<0|1>
// Profile:   key=value lines for s_pr, n_pr, m_delay, f_in, f_out.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "stc/circuit.hpp"
#include "stc/network.hpp"
#include "stc/profile.hpp"

namespace stc {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string to_text(const Network& net);
Network network_from_text(const std::string& text);

std::string to_text(const Circuit& circuit);
Circuit circuit_from_text(const std::string& text);

std::string to_text(const HardwareProfile& profile);
HardwareProfile profile_from_text(const std::string& text);
HardwareProfile load_profile(const std::string& path);

} // namespace stc
