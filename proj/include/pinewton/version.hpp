#ifndef PINEWTON_VERSION_HPP
#define PINEWTON_VERSION_HPP

#define PINEWTON_VERSION_STRING "pinewton 1.0.0"

#endif
