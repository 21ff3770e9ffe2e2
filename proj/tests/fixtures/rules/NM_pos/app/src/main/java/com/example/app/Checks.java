package com.example.app;

import android.net.ConnectivityManager;
import android.net.NetworkCapabilities;
import android.net.NetworkInfo;

public final class Checks {
  private Checks() {
  }

  public static boolean ok(ConnectivityManager cm) {
    NetworkInfo info = cm.getActiveNetworkInfo();
    NetworkCapabilities caps = cm.getNetworkCapabilities(cm.getActiveNetwork());
    boolean wifi = caps != null && caps.hasTransport(NetworkCapabilities.TRANSPORT_WIFI);
    return wifi && caps.hasCapability(NetworkCapabilities.NET_CAPABILITY_INTERNET);
  }
}
