/*
 * kiloscript generated Kilobot controller
 * input digest: e11a0864a27bba5e
 * states: 3 (terminal 2), counters: 0
 * clock: 32 ticks/s, broadcast period: 500 ms
 */
#include "kilolib.h"

static uint16_t cur_state;
static uint32_t state_start_tick;
static volatile uint32_t last_rx_tick;

static const uint32_t STATE_TICKS[3] = {16u, 16u, 0u};

static void goto_state(uint16_t s)
{
    cur_state = s;
    state_start_tick = kilo_ticks;
    switch (s) {
    case 0u:
        set_motors(0, 0);
        set_color(RGB(3, 0, 0));
        break;
    case 1u:
        set_motors(0, 0);
        set_color(RGB(0, 0, 3));
        break;
    case 2u:  /* terminal */
        set_motors(0, 0);
        set_color(RGB(0, 0, 0));
        break;
    default:
        break;
    }
}

static void message_rx(message_t *msg, distance_measurement_t *dist)
{
    (void)dist;
    (void)msg;
    last_rx_tick = kilo_ticks;
}

static void setup(void)
{
    last_rx_tick = kilo_ticks;
    goto_state(0u);
}

static void loop(void)
{
    uint32_t now = kilo_ticks;

    switch (cur_state) {
    case 0u:
        if ((uint32_t)(now - last_rx_tick) >= 64u) {
            goto_state(2u);
            break;
        }
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[0]) {
            goto_state(1u);
        }
        break;
    case 1u:
        if ((uint32_t)(now - last_rx_tick) >= 64u) {
            goto_state(2u);
            break;
        }
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[1]) {
            goto_state(0u);
        }
        break;
    default:
        break;
    }
}

int main(void)
{
    kilo_init();
    kilo_message_rx = message_rx;
    kilo_start(setup, loop);
    return 0;
}
