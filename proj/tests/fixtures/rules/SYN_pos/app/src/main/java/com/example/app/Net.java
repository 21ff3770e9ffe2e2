package com.example.app;

import android.net.ConnectivityManager;
import android.net.NetworkCapabilities;
import android.net.NetworkInfo;

public final class Net {
  private Net() {
  }

  public static boolean ready(ConnectivityManager cm) {
    NetworkInfo info = cm.getActiveNetworkInfo();
    if (info == null || !info.isConnected()) {
      return false;
    }
    NetworkCapabilities caps = cm.getNetworkCapabilities(cm.getActiveNetwork());
    return caps != null
        && caps.hasTransport(NetworkCapabilities.TRANSPORT_WIFI)
        && caps.hasCapability(NetworkCapabilities.NET_CAPABILITY_INTERNET);
  }
}
