name = "channel_purity"
